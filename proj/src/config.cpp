#include "khorbits/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace khorbits {

namespace {

struct DoubleField {
    const char* key;
    double& (*ref)(Config&);
};

struct SizeField {
    const char* key;
    std::size_t& (*ref)(Config&);
};

// Declared order is the canonical serialization order.
constexpr DoubleField kDoubleFields[] = {
    {"integrator.delta", [](Config& c) -> double& { return c.integrator.delta; }},
    {"integrator.omega", [](Config& c) -> double& { return c.integrator.omega; }},
    {"shooting.threshold", [](Config& c) -> double& { return c.shooting.threshold; }},
    {"shooting.t_init", [](Config& c) -> double& { return c.shooting.t_init; }},
    {"shooting.t_max", [](Config& c) -> double& { return c.shooting.t_max; }},
    {"shooting.warmup_frac", [](Config& c) -> double& { return c.shooting.warmup_frac; }},
    {"shooting.escape_radius", [](Config& c) -> double& { return c.shooting.escape_radius; }},
    {"shooting.collision_rho", [](Config& c) -> double& { return c.shooting.collision_rho; }},
    {"shooting.j_tol", [](Config& c) -> double& { return c.shooting.j_tol; }},
    {"optimizer.outer_radius", [](Config& c) -> double& { return c.optimizer.outer_radius; }},
    {"optimizer.inner_radius", [](Config& c) -> double& { return c.optimizer.inner_radius; }},
    {"optimizer.closure_tol", [](Config& c) -> double& { return c.optimizer.closure_tol; }},
    {"plane.p_theta_min", [](Config& c) -> double& { return c.plane.p_theta_min; }},
    {"plane.p_theta_max", [](Config& c) -> double& { return c.plane.p_theta_max; }},
    {"plane.j_min", [](Config& c) -> double& { return c.plane.j_min; }},
    {"plane.j_max", [](Config& c) -> double& { return c.plane.j_max; }},
    {"line.p_theta_min", [](Config& c) -> double& { return c.line.p_theta_min; }},
    {"line.p_theta_max", [](Config& c) -> double& { return c.line.p_theta_max; }},
    {"line.j", [](Config& c) -> double& { return c.line.j; }},
    {"search.py_min", [](Config& c) -> double& { return c.search_py_min; }},
    {"search.py_max", [](Config& c) -> double& { return c.search_py_max; }},
};

constexpr SizeField kSizeFields[] = {
    {"integrator.record_stride", [](Config& c) -> std::size_t& { return c.integrator.record_stride; }},
    {"optimizer.iterations", [](Config& c) -> std::size_t& { return c.optimizer.iterations; }},
    {"plane.n_p_theta", [](Config& c) -> std::size_t& { return c.plane.n_p_theta; }},
    {"plane.n_j", [](Config& c) -> std::size_t& { return c.plane.n_j; }},
    {"line.n", [](Config& c) -> std::size_t& { return c.line.n; }},
    {"search.count", [](Config& c) -> std::size_t& { return c.search_count; }},
    {"workers", [](Config& c) -> std::size_t& { return c.workers; }},
};

std::string_view trim(std::string_view sv) {
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
        sv.remove_suffix(1);
    return sv;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string serialize(const Config& cfg) {
    Config c = cfg;  // accessor table wants a mutable ref
    std::string out;
    for (const auto& f : kDoubleFields) {
        out += f.key;
        out += " = ";
        out += format_double(f.ref(c));
        out += '\n';
    }
    for (const auto& f : kSizeFields) {
        out += f.key;
        out += " = ";
        out += std::to_string(f.ref(c));
        out += '\n';
    }
    return out;
}

bool operator==(const Config& a, const Config& b) { return serialize(a) == serialize(b); }

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string_view key = trim(sv.substr(0, eq));
        const std::string_view value = trim(sv.substr(eq + 1));

        bool matched = false;
        for (const auto& f : kDoubleFields) {
            if (key != f.key) continue;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || ptr != value.data() + value.size())
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad number for " +
                                            std::string(key));
            f.ref(cfg) = v;
            matched = true;
            break;
        }
        if (!matched) {
            for (const auto& f : kSizeFields) {
                if (key != f.key) continue;
                std::size_t v = 0;
                const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
                if (ec != std::errc{} || ptr != value.data() + value.size())
                    throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                ": bad integer for " + std::string(key));
                f.ref(cfg) = v;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                        std::string(key) + "'");
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::uint64_t config_hash(const Config& cfg) {
    const std::string text = serialize(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace khorbits
