#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "khorbits/sampling.hpp"

namespace khorbits {

/// Column layout of records.csv. Optional columns are left empty.
inline constexpr const char* kRecordsHeader = "p_theta,J,objective,period,symmetry_j,symmetry_k,status";

void write_records_header(std::ostream& out);
void write_record_row(std::ostream& out, const ScanRecord& rec);
void write_records_csv(std::ostream& out, const std::vector<ScanRecord>& recs);

/// One data row (no trailing newline); nullopt if malformed. Used by the
/// strict reader below and by scan resume, which keeps the valid prefix of
/// a file cut short by a crash.
std::optional<ScanRecord> parse_record_row(std::string_view line);

/// Strict reader for files produced by the writer above; throws
/// std::runtime_error on a malformed header or row.
std::vector<ScanRecord> read_records_csv(std::istream& in);

}  // namespace khorbits
