#include "khorbits/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace khorbits {

namespace {

void put_bytes(std::ostream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void put_u32(std::ostream& out, std::uint32_t v) { put_bytes(out, &v, sizeof v); }
void put_u64(std::ostream& out, std::uint64_t v) { put_bytes(out, &v, sizeof v); }

void put_f64(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    put_bytes(out, &bits, sizeof bits);
}

void put_string(std::ostream& out, const std::string& s) {
    put_u64(out, s.size());
    put_bytes(out, s.data(), s.size());
}

void put_flagged(std::ostream& out, const std::optional<double>& v) {
    out.put(v ? 1 : 0);
    if (v) put_f64(out, *v);
}

void get_bytes(std::istream& in, void* data, std::size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n))
        throw std::runtime_error("archive: truncated file");
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v;
    get_bytes(in, &v, sizeof v);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v;
    get_bytes(in, &v, sizeof v);
    return v;
}

double get_f64(std::istream& in) {
    std::uint64_t bits;
    get_bytes(in, &bits, sizeof bits);
    return std::bit_cast<double>(bits);
}

std::uint8_t get_u8(std::istream& in) {
    std::uint8_t v;
    get_bytes(in, &v, sizeof v);
    return v;
}

std::string get_string(std::istream& in) {
    const std::uint64_t n = get_u64(in);
    if (n > (1ull << 32)) throw std::runtime_error("archive: implausible string length");
    std::string s(n, '\0');
    get_bytes(in, s.data(), n);
    return s;
}

std::optional<double> get_flagged(std::istream& in) {
    if (get_u8(in) == 0) return std::nullopt;
    return get_f64(in);
}

void put_symmetry(std::ostream& out, const std::optional<SymmetryType>& s) {
    out.put(s ? 1 : 0);
    if (s) {
        put_u32(out, s->j);
        put_u32(out, s->k);
    }
}

std::optional<SymmetryType> get_symmetry(std::istream& in) {
    if (get_u8(in) == 0) return std::nullopt;
    SymmetryType t;
    t.j = get_u32(in);
    t.k = get_u32(in);
    return t;
}

void put_result(std::ostream& out, const OrbitResult& r) {
    put_f64(out, r.initial.px);
    put_f64(out, r.initial.py);
    put_u32(out, static_cast<std::uint32_t>(r.initial.branch >= 0 ? 1 : 0));
    out.put(r.objective ? 1 : 0);
    if (r.objective) {
        put_f64(out, r.objective->value);
        put_f64(out, r.objective->t_star);
    }
    put_flagged(out, r.period);
    put_symmetry(out, r.symmetry);
    put_f64(out, r.duration_used);
    out.put(r.failed ? 1 : 0);
    out.put(r.abort_reason ? static_cast<char>(static_cast<int>(*r.abort_reason) + 1) : 0);
    put_u64(out, r.eval_count);
    put_u64(out, r.history.size());
    for (const double v : r.history) put_f64(out, v);
}

OrbitResult get_result(std::istream& in) {
    OrbitResult r;
    r.initial.px = get_f64(in);
    r.initial.py = get_f64(in);
    r.initial.branch = get_u32(in) != 0 ? +1 : -1;
    if (get_u8(in) != 0) {
        ObjectiveValue o;
        o.value = get_f64(in);
        o.t_star = get_f64(in);
        r.objective = o;
    }
    r.period = get_flagged(in);
    r.symmetry = get_symmetry(in);
    r.duration_used = get_f64(in);
    r.failed = get_u8(in) != 0;
    if (const std::uint8_t reason = get_u8(in); reason != 0) {
        if (reason > 3) throw std::runtime_error("archive: bad abort reason");
        r.abort_reason = static_cast<AbortReason>(reason - 1);
    }
    r.eval_count = get_u64(in);
    r.history.resize(get_u64(in));
    for (double& v : r.history) v = get_f64(in);
    return r;
}

void put_record(std::ostream& out, const ScanRecord& r) {
    put_f64(out, r.p_theta);
    put_f64(out, r.j);
    put_flagged(out, r.objective);
    put_flagged(out, r.period);
    put_symmetry(out, r.symmetry);
    out.put(static_cast<char>(r.status));
}

ScanRecord get_record(std::istream& in) {
    ScanRecord r;
    r.p_theta = get_f64(in);
    r.j = get_f64(in);
    r.objective = get_flagged(in);
    r.period = get_flagged(in);
    r.symmetry = get_symmetry(in);
    const std::uint8_t status = get_u8(in);
    if (status > static_cast<std::uint8_t>(ScanStatus::abortive_escape))
        throw std::runtime_error("archive: bad scan status");
    r.status = static_cast<ScanStatus>(status);
    return r;
}

void put_trajectory(std::ostream& out, const Trajectory& t) {
    put_f64(out, t.t0);
    put_f64(out, t.dt_sample);
    out.put(t.collided ? 1 : 0);
    put_f64(out, t.rho_min);
    put_u64(out, t.states.size());
    for (const PhaseState& s : t.states)
        for (const double v : s.to_array()) put_f64(out, v);
    put_u64(out, t.conserved_trace.size());
    for (const ConservedSet& c : t.conserved_trace) {
        put_f64(out, c.h);
        put_f64(out, c.p_theta);
        put_f64(out, c.j);
    }
}

Trajectory get_trajectory(std::istream& in) {
    Trajectory t;
    t.t0 = get_f64(in);
    t.dt_sample = get_f64(in);
    t.collided = get_u8(in) != 0;
    t.rho_min = get_f64(in);
    t.states.resize(get_u64(in));
    for (PhaseState& s : t.states) {
        Vec6 a;
        for (double& v : a) v = get_f64(in);
        s = PhaseState::from_array(a);
    }
    t.conserved_trace.resize(get_u64(in));
    for (ConservedSet& c : t.conserved_trace) {
        c.h = get_f64(in);
        c.p_theta = get_f64(in);
        c.j = get_f64(in);
    }
    return t;
}

}  // namespace

void save_archive(const std::filesystem::path& path, const Archive& archive) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write archive " + path.string());
    put_bytes(out, kArchiveMagic, sizeof kArchiveMagic);
    put_u32(out, archive.version);
    put_u32(out, kArchiveEndianTag);
    put_string(out, archive.config_text);
    put_string(out, archive.rng_algorithm);
    put_u64(out, archive.seed);
    put_u64(out, archive.results.size());
    for (const auto& r : archive.results) put_result(out, r);
    put_u64(out, archive.records.size());
    for (const auto& r : archive.records) put_record(out, r);
    put_u64(out, archive.trajectories.size());
    for (const auto& lt : archive.trajectories) {
        put_string(out, lt.label);
        put_f64(out, lt.period);
        put_trajectory(out, lt.trajectory);
    }
    if (!out) throw std::runtime_error("archive write failed: " + path.string());
}

Archive load_archive(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read archive " + path.string());
    char magic[8];
    get_bytes(in, magic, sizeof magic);
    if (std::memcmp(magic, kArchiveMagic, sizeof magic) != 0)
        throw std::runtime_error("not an orbit archive: " + path.string());
    Archive a;
    a.version = get_u32(in);
    if (a.version != kArchiveVersion)
        throw std::runtime_error("unsupported archive version " + std::to_string(a.version));
    if (get_u32(in) != kArchiveEndianTag)
        throw std::runtime_error("archive byte order does not match this machine");
    a.config_text = get_string(in);
    a.rng_algorithm = get_string(in);
    a.seed = get_u64(in);
    a.results.resize(get_u64(in));
    for (auto& r : a.results) r = get_result(in);
    a.records.resize(get_u64(in));
    for (auto& r : a.records) r = get_record(in);
    a.trajectories.resize(get_u64(in));
    for (auto& lt : a.trajectories) {
        lt.label = get_string(in);
        lt.period = get_f64(in);
        lt.trajectory = get_trajectory(in);
    }
    return a;
}

}  // namespace khorbits
