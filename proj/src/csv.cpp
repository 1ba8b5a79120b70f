#include "khorbits/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "khorbits/config.hpp"

namespace khorbits {

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

bool parse_double(std::string_view field, double& out) {
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

bool parse_unsigned(std::string_view field, unsigned& out) {
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

}  // namespace

void write_records_header(std::ostream& out) { out << kRecordsHeader << '\n'; }

void write_record_row(std::ostream& out, const ScanRecord& rec) {
    out << format_double(rec.p_theta) << ',' << format_double(rec.j) << ',';
    if (rec.objective) out << format_double(*rec.objective);
    out << ',';
    if (rec.period) out << format_double(*rec.period);
    out << ',';
    if (rec.symmetry) out << rec.symmetry->j;
    out << ',';
    if (rec.symmetry) out << rec.symmetry->k;
    out << ',' << to_string(rec.status) << '\n';
}

void write_records_csv(std::ostream& out, const std::vector<ScanRecord>& recs) {
    write_records_header(out);
    for (const auto& rec : recs) write_record_row(out, rec);
}

std::optional<ScanRecord> parse_record_row(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_row(line);
    if (fields.size() != 7) return std::nullopt;

    ScanRecord rec;
    if (!parse_double(fields[0], rec.p_theta)) return std::nullopt;
    if (!parse_double(fields[1], rec.j)) return std::nullopt;

    double v = 0.0;
    if (!fields[2].empty()) {
        if (!parse_double(fields[2], v)) return std::nullopt;
        rec.objective = v;
    }
    if (!fields[3].empty()) {
        if (!parse_double(fields[3], v)) return std::nullopt;
        rec.period = v;
    }
    if (fields[4].empty() != fields[5].empty()) return std::nullopt;
    if (!fields[4].empty()) {
        SymmetryType t;
        if (!parse_unsigned(fields[4], t.j) || !parse_unsigned(fields[5], t.k)) return std::nullopt;
        if (t.j == 0 || t.k == 0) return std::nullopt;
        rec.symmetry = t;
    }
    const auto status = scan_status_from_string(fields[6]);
    if (!status) return std::nullopt;
    rec.status = *status;
    return rec;
}

std::vector<ScanRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("records.csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordsHeader) throw std::runtime_error("records.csv: unexpected header");

    std::vector<ScanRecord> recs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto rec = parse_record_row(line);
        if (!rec)
            throw std::runtime_error("records.csv line " + std::to_string(lineno) + ": malformed row");
        recs.push_back(*rec);
    }
    return recs;
}

}  // namespace khorbits
