#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "khorbits/archive.hpp"
#include "khorbits/commands.hpp"
#include "khorbits/config.hpp"
#include "khorbits/csv.hpp"

using namespace khorbits;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / "khorbits_io" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Small enough to keep both scan tests under a second while still mixing
/// outcome statuses.
Config tiny_config() {
    Config cfg;
    cfg.integrator.delta = 2e-3;
    cfg.shooting.t_init = 10.0;
    cfg.shooting.t_max = 40.0;
    cfg.optimizer.iterations = 4;
    cfg.line = {0.15, 0.18, 0.0, 5};
    cfg.plane = {0.1, 0.3, -0.05, 0.05, 4, 3};
    cfg.search_count = 2;
    cfg.search_py_min = 0.1;
    cfg.search_py_max = 0.35;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("config text round trips") {
    Config cfg = tiny_config();
    cfg.integrator.omega = 123.456;
    cfg.shooting.collision_rho = 3e-7;
    cfg.optimizer.inner_radius = 1e-11;

    const std::string text = serialize(cfg);
    const Config back = parse_config(text);
    CHECK(back == cfg);
    CHECK(serialize(back) == text);

    // Comments, blank lines and stray spaces are all tolerated.
    const Config sparse = parse_config(
        "# survey setup\n"
        "\n"
        "  integrator.delta = 0.004  \n"
        "workers=3\n");
    CHECK(sparse.integrator.delta == 0.004);
    CHECK(sparse.workers == 3);
    // Unmentioned keys keep their defaults.
    CHECK(sparse.shooting.t_max == Config{}.shooting.t_max);
}

TEST_CASE("config parsing rejects typos") {
    CHECK_THROWS_AS((void)parse_config("integrator.detla = 0.001\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_config("integrator.delta = fast\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_config("integrator.delta\n"), std::invalid_argument);
    try {
        (void)parse_config("workers = 1\nnot.a.key = 2\n");
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        // The message names the offending line.
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
}

TEST_CASE("config hash tracks content") {
    const Config a = tiny_config();
    Config b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.shooting.threshold = 0.2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(parse_config(serialize(a))) == config_hash(a));
}

TEST_CASE("float formatting keeps full precision") {
    for (const double v : {1.0 / 3.0, 0.1, -2.5e-13, 84.60712345678901, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("archive round trips bit for bit") {
    Archive a;
    a.config_text = serialize(tiny_config());
    a.rng_algorithm = "splitmix64-v1";
    a.seed = 0xdeadbeefcafeULL;

    OrbitResult full;
    full.initial = {0.01, 0.164, -1};
    full.objective = ObjectiveValue{4.6e-6, 84.607};
    full.period = 84.607;
    full.symmetry = SymmetryType{1, 2};
    full.history = {0.3, 0.05, 4.6e-6};
    full.duration_used = 106.0;
    full.eval_count = 42;
    a.results.push_back(full);

    OrbitResult failed;
    failed.initial = {0.2, 0.2, +1};
    failed.failed = true;
    failed.abort_reason = AbortReason::escape;
    failed.duration_used = 20.0;
    failed.eval_count = 1;
    a.results.push_back(failed);

    a.records.push_back({0.164, 0.01, 4.6e-6, 84.607, SymmetryType{1, 2}, ScanStatus::closed});
    a.records.push_back({0.2, -0.1, 0.37, std::nullopt, std::nullopt,
                         ScanStatus::abortive_collision});
    a.records.push_back({0.3, 0.0, std::nullopt, std::nullopt, std::nullopt,
                         ScanStatus::abortive_timeout});

    Trajectory t;
    t.t0 = 1.5;
    t.dt_sample = 0.01;
    t.collided = true;
    t.rho_min = 3.2e-9;
    for (int i = 0; i < 7; ++i) {
        PhaseState s{0.1 * i, -0.2 * i, 1e-17 * i, 0.3, -0.4, 0.5 + i};
        t.states.push_back(s);
        t.conserved_trace.push_back({1e-15 * i, 0.164, 0.01 * i});
    }
    a.trajectories.push_back({"orbit_0003", 84.607, t});

    const fs::path dir = fresh_dir("archive");
    save_archive(dir / "a.bin", a);
    const Archive b = load_archive(dir / "a.bin");

    CHECK(b.version == a.version);
    CHECK(b.config_text == a.config_text);
    CHECK(b.rng_algorithm == a.rng_algorithm);
    CHECK(b.seed == a.seed);

    REQUIRE(b.results.size() == 2);
    const OrbitResult& rf = b.results[0];
    CHECK(rf.initial.px == full.initial.px);
    CHECK(rf.initial.py == full.initial.py);
    CHECK(rf.initial.branch == full.initial.branch);
    REQUIRE(rf.objective.has_value());
    CHECK(rf.objective->value == full.objective->value);
    CHECK(rf.objective->t_star == full.objective->t_star);
    CHECK(rf.period == full.period);
    CHECK(rf.symmetry == full.symmetry);
    CHECK(rf.history == full.history);
    CHECK(rf.duration_used == full.duration_used);
    CHECK(rf.failed == full.failed);
    CHECK(!rf.abort_reason.has_value());
    CHECK(rf.eval_count == full.eval_count);
    CHECK(b.results[1].failed);
    CHECK(b.results[1].abort_reason == AbortReason::escape);
    CHECK(!b.results[1].objective.has_value());

    REQUIRE(b.records.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(b.records[i] == a.records[i]);

    REQUIRE(b.trajectories.size() == 1);
    CHECK(b.trajectories[0].label == "orbit_0003");
    CHECK(b.trajectories[0].period == 84.607);
    const Trajectory& bt = b.trajectories[0].trajectory;
    CHECK(bt.t0 == t.t0);
    CHECK(bt.dt_sample == t.dt_sample);
    CHECK(bt.collided == t.collided);
    CHECK(bt.rho_min == t.rho_min);
    REQUIRE(bt.states.size() == t.states.size());
    REQUIRE(bt.conserved_trace.size() == t.conserved_trace.size());
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        CHECK(bt.states[i] == t.states[i]);
        CHECK(bt.conserved_trace[i].h == t.conserved_trace[i].h);
        CHECK(bt.conserved_trace[i].p_theta == t.conserved_trace[i].p_theta);
        CHECK(bt.conserved_trace[i].j == t.conserved_trace[i].j);
    }
}

TEST_CASE("archive rejects foreign or truncated files") {
    const fs::path dir = fresh_dir("archive_bad");
    spit(dir / "text.bin", "this is not an archive at all, sorry\n");
    CHECK_THROWS_AS((void)load_archive(dir / "text.bin"), std::runtime_error);
    CHECK_THROWS_AS((void)load_archive(dir / "missing.bin"), std::runtime_error);

    Archive a;
    a.config_text = "workers = 1\n";
    a.records.push_back({0.1, 0.0, std::nullopt, std::nullopt, std::nullopt,
                         ScanStatus::candidate});
    save_archive(dir / "good.bin", a);
    const std::string bytes = slurp(dir / "good.bin");
    spit(dir / "cut.bin", bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS((void)load_archive(dir / "cut.bin"), std::runtime_error);

    std::string flipped = bytes;
    flipped[0] = 'X';
    spit(dir / "magic.bin", flipped);
    CHECK_THROWS_AS((void)load_archive(dir / "magic.bin"), std::runtime_error);
}

TEST_CASE("records csv round trips") {
    std::vector<ScanRecord> recs;
    recs.push_back({0.164, 0.01, 4.6e-6, 84.607, SymmetryType{1, 2}, ScanStatus::closed});
    recs.push_back({0.2, -0.1, 0.37, std::nullopt, std::nullopt, ScanStatus::abortive_collision});
    recs.push_back({1.0 / 3.0, 0.0, std::nullopt, std::nullopt, std::nullopt,
                    ScanStatus::candidate});

    std::ostringstream out;
    write_records_csv(out, recs);
    const std::string text = out.str();
    CHECK(text.rfind(kRecordsHeader, 0) == 0);

    std::istringstream in(text);
    const auto back = read_records_csv(in);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) CHECK(back[i] == recs[i]);
}

TEST_CASE("malformed csv rows are rejected") {
    CHECK(!parse_record_row("").has_value());
    CHECK(!parse_record_row("justonefield").has_value());
    CHECK(!parse_record_row(kRecordsHeader).has_value());
    // symmetry_j and symmetry_k must come together
    CHECK(!parse_record_row("0.1,0.2,,,2,,closed").has_value());
    CHECK(!parse_record_row("0.1,0.2,,,0,0,closed").has_value());
    CHECK(!parse_record_row("0.1,0.2,,,,,bogus").has_value());
    CHECK(!parse_record_row("0.1,0.2,,,,,candidate,extra").has_value());
    // A carriage return from a Windows editor is fine.
    CHECK(parse_record_row("0.1,0,,,,,candidate\r").has_value());

    std::istringstream bad_header("what,is,this\n0.1,0,,,,,candidate\n");
    CHECK_THROWS_AS((void)read_records_csv(bad_header), std::runtime_error);
    std::istringstream bad_row(std::string(kRecordsHeader) + "\n0.1,0,,,,,nonsense\n");
    CHECK_THROWS_AS((void)read_records_csv(bad_row), std::runtime_error);
}

TEST_CASE("volatile summary lines are stripped") {
    const std::string text =
        "command: search\n"
        "seed: 42\n"
        "generated_at: 2024-05-01T10:00:00Z\n"
        "points: 3\n"
        "wall_time_s: 1.234\n";
    CHECK(strip_volatile_lines(text) == "command: search\nseed: 42\npoints: 3\n");
}

TEST_CASE("interrupted line scan resumes to identical output") {
    const Config cfg = tiny_config();

    RunContext full;
    full.config = cfg;
    full.out_dir = fresh_dir("line_full");
    full.seed = 9001;
    REQUIRE(cmd_scan_line(full) == 0);
    const std::string want_csv = slurp(full.out_dir / "records.csv");
    const std::string want_summary = strip_volatile_lines(slurp(full.out_dir / "summary.txt"));
    CHECK(!fs::exists(full.out_dir / "resume.txt"));

    // Simulate a crash mid-write: keep the header, one whole row and a torn
    // second row, with a manifest that still claims two rows.
    std::vector<std::string> lines;
    {
        std::istringstream in(want_csv);
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }
    REQUIRE(lines.size() == 1 + cfg.line.n);

    RunContext cut;
    cut.config = cfg;
    cut.out_dir = fresh_dir("line_cut");
    cut.seed = 9001;
    spit(cut.out_dir / "records.csv",
         lines[0] + "\n" + lines[1] + "\n" + lines[2].substr(0, lines[2].size() / 2));
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    spit(cut.out_dir / "resume.txt",
         "kind: scan-line\nconfig_hash: " + std::string(hash) +
             "\nseed: 9001\ntotal: " + std::to_string(cfg.line.n) + "\ncompleted: 2\n");

    REQUIRE(cmd_scan_line(cut) == 0);
    CHECK(slurp(cut.out_dir / "records.csv") == want_csv);
    CHECK(strip_volatile_lines(slurp(cut.out_dir / "summary.txt")) == want_summary);
    CHECK(slurp(cut.out_dir / "archive.bin") == slurp(full.out_dir / "archive.bin"));
    CHECK(!fs::exists(cut.out_dir / "resume.txt"));

    // A manifest from a different run must not leak rows into this one.
    RunContext stale;
    stale.config = cfg;
    stale.out_dir = fresh_dir("line_stale");
    stale.seed = 9001;
    spit(stale.out_dir / "records.csv", lines[0] + "\n" + lines[1] + "\n");
    spit(stale.out_dir / "resume.txt",
         "kind: scan-line\nconfig_hash: " + std::string(hash) +
             "\nseed: 1234\ntotal: " + std::to_string(cfg.line.n) + "\ncompleted: 1\n");
    REQUIRE(cmd_scan_line(stale) == 0);
    CHECK(slurp(stale.out_dir / "records.csv") == want_csv);
}

TEST_CASE("plane scan writes a heat map") {
    RunContext ctx;
    ctx.config = tiny_config();
    ctx.out_dir = fresh_dir("plane");
    ctx.seed = 3;
    REQUIRE(cmd_scan_plane(ctx) == 0);

    const std::string svg = slurp(ctx.out_dir / "heatmap.svg");
    CHECK(svg.rfind("<svg", 0) == 0);

    const Archive arch = load_archive(ctx.out_dir / "archive.bin");
    CHECK(arch.records.size() == ctx.config.plane.size());
    CHECK(arch.seed == 3);

    const std::string summary = slurp(ctx.out_dir / "summary.txt");
    CHECK(summary.find("command: scan-plane") != std::string::npos);
    CHECK(summary.find("points: 12") != std::string::npos);
}

TEST_CASE("search runs are reproducible") {
    RunContext a;
    a.config = tiny_config();
    a.out_dir = fresh_dir("search_a");
    REQUIRE(cmd_search(a, 7) == 0);

    RunContext b;
    b.config = tiny_config();
    b.out_dir = fresh_dir("search_b");
    REQUIRE(cmd_search(b, 7) == 0);

    CHECK(slurp(a.out_dir / "records.csv") == slurp(b.out_dir / "records.csv"));
    CHECK(strip_volatile_lines(slurp(a.out_dir / "summary.txt")) ==
          strip_volatile_lines(slurp(b.out_dir / "summary.txt")));
    CHECK(slurp(a.out_dir / "archive.bin") == slurp(b.out_dir / "archive.bin"));

    RunContext c;
    c.config = tiny_config();
    c.out_dir = fresh_dir("search_c");
    REQUIRE(cmd_search(c, 8) == 0);
    CHECK(slurp(c.out_dir / "records.csv") != slurp(a.out_dir / "records.csv"));
}
