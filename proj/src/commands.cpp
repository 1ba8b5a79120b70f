#include "khorbits/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "khorbits/archive.hpp"
#include "khorbits/csv.hpp"
#include "khorbits/rng.hpp"
#include "khorbits/scan.hpp"
#include "khorbits/svg.hpp"

namespace khorbits {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

using Fields = std::vector<std::pair<std::string, std::string>>;

void write_summary(const fs::path& path, const Fields& fields, double wall_s) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [key, value] : fields) out << key << ": " << value << '\n';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", wall_s);
    out << "generated_at: " << iso_now() << '\n';
    out << "wall_time_s: " << buf << '\n';
}

const fs::path& ensure_out(const RunContext& ctx) {
    fs::create_directories(ctx.out_dir);
    return ctx.out_dir;
}

void append_status_fields(Fields& fields, const std::vector<ScanRecord>& recs) {
    std::size_t counts[5] = {0, 0, 0, 0, 0};
    std::optional<double> best;
    for (const auto& r : recs) {
        ++counts[static_cast<std::size_t>(r.status)];
        if (r.objective &&
            (r.status == ScanStatus::candidate || r.status == ScanStatus::closed) &&
            (!best || *r.objective < *best))
            best = *r.objective;
    }
    fields.emplace_back("points", std::to_string(recs.size()));
    fields.emplace_back("candidates", std::to_string(counts[0]));
    fields.emplace_back("closed", std::to_string(counts[1]));
    fields.emplace_back("abortive-timeout", std::to_string(counts[2]));
    fields.emplace_back("abortive-collision", std::to_string(counts[3]));
    fields.emplace_back("abortive-escape", std::to_string(counts[4]));
    if (best) fields.emplace_back("best_objective", format_double(*best));
}

/// Distinct symmetry types of closed records in scan order, consecutive
/// duplicates squashed.
std::string type_sequence(const std::vector<ScanRecord>& recs) {
    std::string seq;
    std::optional<SymmetryType> last;
    for (const auto& r : recs) {
        if (r.status != ScanStatus::closed || !r.symmetry) continue;
        if (last && *last == *r.symmetry) continue;
        last = r.symmetry;
        if (!seq.empty()) seq += ' ';
        seq += r.symmetry->str();
    }
    return seq;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct ResumeManifest {
    std::string kind;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::size_t total = 0;
    std::size_t completed = 0;
};

std::optional<ResumeManifest> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    ResumeManifest m;
    int seen = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) return std::nullopt;
        const std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        value.erase(0, value.find_first_not_of(' '));
        try {
            if (key == "kind") {
                m.kind = value;
            } else if (key == "config_hash") {
                m.config_hash = std::stoull(value, nullptr, 16);
            } else if (key == "seed") {
                m.seed = std::stoull(value);
            } else if (key == "total") {
                m.total = std::stoull(value);
            } else if (key == "completed") {
                m.completed = std::stoull(value);
            } else {
                return std::nullopt;
            }
        } catch (const std::exception&) {
            return std::nullopt;
        }
        ++seen;
    }
    if (seen != 5) return std::nullopt;
    return m;
}

void write_manifest(const fs::path& path, const ResumeManifest& m) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "kind: " << m.kind << '\n'
            << "config_hash: " << hex64(m.config_hash) << '\n'
            << "seed: " << m.seed << '\n'
            << "total: " << m.total << '\n'
            << "completed: " << m.completed << '\n';
    }
    fs::rename(tmp, path);
}

/// Rows already committed by an interrupted run with identical parameters;
/// never more than the manifest says were complete.
std::vector<ScanRecord> recover_rows(const fs::path& csv_path, std::size_t completed) {
    std::vector<ScanRecord> rows;
    std::ifstream in(csv_path);
    if (!in) return rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordsHeader) return rows;
    while (rows.size() < completed && std::getline(in, line)) {
        const auto rec = parse_record_row(line);
        if (!rec) break;
        rows.push_back(*rec);
    }
    return rows;
}

int run_scan_command(const RunContext& ctx, const std::string& kind,
                     const std::vector<ReducedIC>& points, bool refine) {
    const Stopwatch watch;
    const fs::path& dir = ensure_out(ctx);
    const fs::path csv_path = dir / "records.csv";
    const fs::path manifest_path = dir / "resume.txt";

    ScanPointConfig pc;
    pc.integrator = ctx.config.integrator;
    pc.shooting = ctx.config.shooting;
    pc.optimizer = ctx.config.optimizer;
    pc.seed = ctx.seed;
    pc.workers = ctx.config.workers;
    pc.refine = refine;

    const std::uint64_t chash = config_hash(ctx.config);
    std::vector<ScanRecord> done;
    if (const auto m = read_manifest(manifest_path);
        m && m->kind == kind && m->config_hash == chash && m->seed == ctx.seed &&
        m->total == points.size())
        done = recover_rows(csv_path, m->completed);
    const std::size_t first = std::min(done.size(), points.size());

    {
        std::ofstream out(csv_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + csv_path.string());
        write_records_header(out);
        for (const auto& r : done) write_record_row(out, r);
    }

    ResumeManifest manifest{kind, chash, ctx.seed, points.size(), first};
    write_manifest(manifest_path, manifest);

    {
        std::ofstream csv(csv_path, std::ios::app);
        const auto on_record = [&](std::size_t idx, const ScanRecord& rec) {
            write_record_row(csv, rec);
            csv.flush();
            manifest.completed = idx + 1;
            write_manifest(manifest_path, manifest);
        };
        auto fresh = run_scan(points, pc, on_record, first);
        done.insert(done.end(), std::make_move_iterator(fresh.begin()),
                    std::make_move_iterator(fresh.end()));
    }

    if (!refine) {
        std::ofstream svg(dir / "heatmap.svg", std::ios::trunc);
        write_heatmap_svg(svg, ctx.config.plane, done);
    }

    Archive archive;
    archive.config_text = serialize(ctx.config);
    archive.rng_algorithm = std::string(Rng::kAlgorithm);
    archive.seed = ctx.seed;
    archive.records = done;
    save_archive(dir / "archive.bin", archive);

    Fields fields;
    fields.emplace_back("command", kind);
    fields.emplace_back("seed", std::to_string(ctx.seed));
    fields.emplace_back("config_hash", hex64(chash));
    append_status_fields(fields, done);
    if (refine) fields.emplace_back("type_sequence", type_sequence(done));
    write_summary(dir / "summary.txt", fields, watch.seconds());

    fs::remove(manifest_path);
    return 0;
}

void write_abortive_report(const fs::path& dir, std::size_t index, const ReducedIC& ic,
                           const ScanRecord& rec) {
    fs::create_directories(dir);
    char name[64];
    std::snprintf(name, sizeof name, "point_%04zu.txt", index);
    std::ofstream out(dir / name, std::ios::trunc);
    out << "index: " << index << '\n'
        << "p_x: " << format_double(ic.px) << '\n'
        << "p_y: " << format_double(ic.py) << '\n'
        << "p_theta: " << format_double(rec.p_theta) << '\n'
        << "J: " << format_double(rec.j) << '\n'
        << "status: " << to_string(rec.status) << '\n';
    if (rec.objective) out << "best_objective: " << format_double(*rec.objective) << '\n';
}

}  // namespace

std::string strip_volatile_lines(const std::string& text) {
    std::istringstream in(text);
    std::string out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("generated_at:", 0) == 0 || line.rfind("wall_time_s:", 0) == 0) continue;
        out += line;
        out += '\n';
    }
    return out;
}

OrbitResult refine_and_classify(const ReducedIC& start, const Config& cfg, std::uint64_t seed) {
    OptimizerConfig ocfg = cfg.optimizer;
    ocfg.seed = seed;
    OrbitResult result = optimize(start, ocfg, cfg.integrator, cfg.shooting);
    if (result.closed()) classify_closed(result, cfg.integrator);
    return result;
}

int cmd_search(const RunContext& ctx, std::uint64_t seed) {
    const Stopwatch watch;
    const fs::path& dir = ensure_out(ctx);
    const Config& cfg = ctx.config;

    // Independent sub-streams: one for drawing points, one for the
    // refinement walks, so the first proposal never repeats the draw.
    const std::uint64_t ic_root = Rng::derive(seed, 0);
    const std::uint64_t opt_root = Rng::derive(seed, 1);

    std::vector<ReducedIC> points;
    points.reserve(cfg.search_count);
    for (std::size_t i = 0; i < cfg.search_count; ++i)
        points.push_back(random_ic(Rng::derive(ic_root, i), cfg.search_py_min, cfg.search_py_max));

    ScanPointConfig pc;
    pc.integrator = cfg.integrator;
    pc.shooting = cfg.shooting;
    pc.optimizer = cfg.optimizer;
    pc.seed = opt_root;
    pc.workers = cfg.workers;
    pc.refine = true;

    std::ofstream csv(dir / "records.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "records.csv").string());
    write_records_header(csv);

    Archive archive;
    archive.config_text = serialize(cfg);
    archive.rng_algorithm = std::string(Rng::kAlgorithm);
    archive.seed = seed;

    std::vector<ScanRecord> records;
    records.reserve(points.size());

    const std::function<PointOutcome(std::size_t)> eval = [&](std::size_t i) {
        return evaluate_scan_point_full(i, points[i], pc, true);
    };
    const std::function<void(std::size_t, const PointOutcome&)> commit = [&](std::size_t i,
                                                                             const PointOutcome& po) {
        write_record_row(csv, po.record);
        records.push_back(po.record);
        if (po.result) archive.results.push_back(*po.result);
        if (po.orbit && po.result && po.result->period) {
            char label[32];
            std::snprintf(label, sizeof label, "orbit_%04zu", i);
            archive.trajectories.push_back({label, *po.result->period, *po.orbit});
        }
        if (po.record.status != ScanStatus::candidate && po.record.status != ScanStatus::closed)
            write_abortive_report(ctx.out_dir / "abortive", i, points[i], po.record);
    };
    const std::size_t workers = pc.workers != 0
                                    ? pc.workers
                                    : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    run_ordered<PointOutcome>(0, points.size(), workers, eval, commit);
    csv.close();

    save_archive(dir / "archive.bin", archive);

    Fields fields;
    fields.emplace_back("command", "search");
    fields.emplace_back("seed", std::to_string(seed));
    fields.emplace_back("rng", std::string(Rng::kAlgorithm));
    append_status_fields(fields, records);
    write_summary(dir / "summary.txt", fields, watch.seconds());
    return 0;
}

int cmd_optimize(const RunContext& ctx, double px, double py) {
    const Stopwatch watch;
    const fs::path& dir = ensure_out(ctx);
    const ReducedIC start{px, py, +1};

    OptimizerConfig ocfg = ctx.config.optimizer;
    ocfg.seed = ctx.seed;
    OrbitResult result = optimize(start, ocfg, ctx.config.integrator, ctx.config.shooting);
    std::optional<Trajectory> orbit;
    if (result.closed()) orbit = classify_closed(result, ctx.config.integrator);

    ScanRecord rec;
    rec.p_theta = result.initial.py;
    rec.j = result.initial.px;
    if (result.objective) rec.objective = result.objective->value;
    rec.period = result.period;
    rec.symmetry = result.symmetry;
    if (result.failed) {
        switch (result.abort_reason.value_or(AbortReason::timeout)) {
            case AbortReason::timeout: rec.status = ScanStatus::abortive_timeout; break;
            case AbortReason::collision: rec.status = ScanStatus::abortive_collision; break;
            case AbortReason::escape: rec.status = ScanStatus::abortive_escape; break;
        }
    } else {
        rec.status = result.closed() ? ScanStatus::closed : ScanStatus::candidate;
    }

    {
        std::ofstream csv(dir / "records.csv", std::ios::trunc);
        write_records_csv(csv, {rec});
    }

    Archive archive;
    archive.config_text = serialize(ctx.config);
    archive.rng_algorithm = std::string(Rng::kAlgorithm);
    archive.seed = ctx.seed;
    archive.results.push_back(result);
    if (orbit && result.period)
        archive.trajectories.push_back({"orbit", *result.period, std::move(*orbit)});
    save_archive(dir / "archive.bin", archive);

    Fields fields;
    fields.emplace_back("command", "optimize");
    fields.emplace_back("seed", std::to_string(ctx.seed));
    fields.emplace_back("initial_px", format_double(start.px));
    fields.emplace_back("initial_py", format_double(start.py));
    fields.emplace_back("refined_px", format_double(result.initial.px));
    fields.emplace_back("refined_py", format_double(result.initial.py));
    fields.emplace_back("status", to_string(rec.status));
    if (result.objective) fields.emplace_back("objective", format_double(result.objective->value));
    if (result.period) fields.emplace_back("period", format_double(*result.period));
    if (result.symmetry) fields.emplace_back("type", result.symmetry->str());
    fields.emplace_back("accepted_steps",
                        std::to_string(result.history.empty() ? 0 : result.history.size() - 1));
    fields.emplace_back("evaluations", std::to_string(result.eval_count));
    write_summary(dir / "summary.txt", fields, watch.seconds());

    std::cout << "status: " << to_string(rec.status) << '\n'
              << "refined: p_x = " << format_double(result.initial.px)
              << ", p_y = " << format_double(result.initial.py) << '\n';
    if (result.objective) std::cout << "objective: " << format_double(result.objective->value) << '\n';
    if (result.period) std::cout << "period: " << format_double(*result.period) << '\n';
    if (result.symmetry) std::cout << "type: " << result.symmetry->str() << '\n';
    return 0;
}

int cmd_scan_plane(const RunContext& ctx) {
    return run_scan_command(ctx, "scan-plane", plane_points(ctx.config.plane), false);
}

int cmd_scan_line(const RunContext& ctx) {
    return run_scan_command(ctx, "scan-line", line_points(ctx.config.line), true);
}

int cmd_detect(const RunContext& ctx, const fs::path& archive_path) {
    const Stopwatch watch;
    const Archive archive = load_archive(archive_path);
    if (archive.trajectories.empty()) {
        std::cerr << "archive holds no trajectories; nothing to classify\n";
        return 1;
    }
    const fs::path& dir = ensure_out(ctx);

    Fields fields;
    fields.emplace_back("command", "detect");
    fields.emplace_back("archive", archive_path.string());
    std::ofstream types(dir / "types.txt", std::ios::trunc);
    for (const auto& lt : archive.trajectories) {
        const double period = lt.period > 0.0 ? lt.period : lt.trajectory.duration();
        std::string line;
        try {
            const Trajectory one = resample_period(lt.trajectory, period, kResampleLength);
            const SymmetryType type = detect_type(one);
            const double residual = verify_symmetry(one, type);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s residual %.3g", type.str().c_str(), residual);
            line = buf;
        } catch (const DegenerateSignalError&) {
            line = "degenerate (flat z signal)";
        } catch (const AmbiguousTypeError& e) {
            line = std::string("ambiguous (") + e.what() + ")";
        }
        types << lt.label << ": " << line << '\n';
        std::cout << lt.label << ": " << line << '\n';
        fields.emplace_back(lt.label, line);
    }
    types.close();
    write_summary(dir / "summary.txt", fields, watch.seconds());
    return 0;
}

int cmd_plot(const RunContext& ctx, const fs::path& archive_path) {
    const Stopwatch watch;
    const Archive archive = load_archive(archive_path);
    const fs::path& dir = ensure_out(ctx);

    std::size_t written = 0;
    Fields fields;
    fields.emplace_back("command", "plot");
    fields.emplace_back("archive", archive_path.string());
    for (const auto& lt : archive.trajectories) {
        for (const auto& [proj, tag] :
             {std::pair{Projection::xy, "xy"}, std::pair{Projection::xz, "xz"}}) {
            const fs::path path = dir / (lt.label + "_" + tag + ".svg");
            std::ofstream out(path, std::ios::trunc);
            write_orbit_svg(out, lt.trajectory, proj);
            fields.emplace_back("plot", path.filename().string());
            ++written;
        }
    }

    if (!archive.config_text.empty()) {
        try {
            const Config cfg = parse_config(archive.config_text);
            if (archive.records.size() == cfg.plane.size()) {
                std::ofstream out(dir / "heatmap.svg", std::ios::trunc);
                write_heatmap_svg(out, cfg.plane, archive.records);
                fields.emplace_back("plot", "heatmap.svg");
                ++written;
            }
        } catch (const std::invalid_argument&) {
            // foreign config text; no heat map
        }
    }

    if (written == 0) {
        std::cerr << "archive holds neither trajectories nor a full scan plane; nothing to plot\n";
        return 1;
    }
    write_summary(dir / "summary.txt", fields, watch.seconds());
    return 0;
}

}  // namespace khorbits
