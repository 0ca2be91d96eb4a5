#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "support/helpers.hpp"
#include "synthbench/bench.hpp"
#include "synthbench/cli.hpp"
#include "synthbench/csv.hpp"
#include "synthbench/errors.hpp"
#include "synthbench/seed_data.hpp"

using namespace synthbench;

namespace {

std::string strip_timing(const std::string& report_json) {
    auto j = nlohmann::json::parse(report_json);
    j.erase("timing");
    return j.dump(2);
}

int cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"synthbench"};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config: empty methods, bad method and missing file are rejected") {
    CHECK_THROWS_AS(parse_config_text(R"({"methods": []})", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"methods": ["nope"]})", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{not json", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config("missing.toml"), ConfigError);
    try {
        parse_config("missing.toml");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("missing.toml") != std::string::npos);
    }
}

TEST_CASE("config: defaults and overrides parse") {
    const auto cfg = parse_config_text(
        R"({"methods": ["bootstrap", "smote"],
            "seed_data": {"rows": 500, "seed": 4},
            "rows": 600, "seed": 99,
            "overrides": {"smote": {"k_neighbors": 3}}})",
        "t");
    CHECK(cfg.rows == 600);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.schema.class_target == "RaceEthnicity");
    CHECK(cfg.overrides.at("smote").k_neighbors == 3);
}

TEST_CASE("run_bench: determinism modulo timing, method isolation") {
    BenchmarkConfig cfg;
    cfg.seed_data = SeedDataSpec{400, 11};
    cfg.schema = student_schema();
    cfg.methods = {"bootstrap", "ros"};
    cfg.rows = 400;
    cfg.master_seed = 42;

    const auto real = seed_dataset(400, 11);
    const auto r1 = run_bench(cfg, real);
    const auto r2 = run_bench(cfg, real);
    CHECK(strip_timing(emit_json(r1)) == strip_timing(emit_json(r2)));

    // removing a method leaves the other's numbers unchanged
    BenchmarkConfig cfg_solo = cfg;
    cfg_solo.methods = {"ros"};
    const auto r3 = run_bench(cfg_solo, real);
    CHECK(r3.methods.size() == 1);
    CHECK(r3.methods[0].fidelity.mean_ks == r1.methods[1].fidelity.mean_ks);
    CHECK(r3.methods[0].fidelity.dcr == r1.methods[1].fidelity.dcr);
    CHECK(r3.methods[0].tstr.classification_accuracy ==
          r1.methods[1].tstr.classification_accuracy);
}

TEST_CASE("run_bench: a failing method becomes an error entry, others complete") {
    BenchmarkConfig cfg;
    cfg.seed_data = SeedDataSpec{40, 2};
    cfg.schema = student_schema();
    cfg.methods = {"smote", "bootstrap"};
    cfg.rows = 40;
    cfg.master_seed = 1;
    // race class A at 7% of 40 rows ~ 3 rows <= k_neighbors=5 -> smote fails
    const auto real = seed_dataset(40, 2);
    const auto report = run_bench(cfg, real);
    REQUIRE(report.methods.size() == 2);
    CHECK(report.methods[0].failed);
    CHECK(report.methods[0].error.find("class") != std::string::npos);
    CHECK_FALSE(report.methods[1].failed);
}

TEST_CASE("report JSON round-trips through its own parser") {
    BenchmarkConfig cfg;
    cfg.seed_data = SeedDataSpec{300, 3};
    cfg.schema = student_schema();
    cfg.methods = {"bootstrap"};
    cfg.rows = 300;
    const auto report = run_bench(cfg, seed_dataset(300, 3));
    const auto text = emit_json(report);
    const auto parsed = parse_report_json(text);
    CHECK(emit_json(parsed) == text);
}

TEST_CASE("markdown table has the documented column order and rounding") {
    BenchmarkConfig cfg;
    cfg.seed_data = SeedDataSpec{300, 3};
    cfg.schema = student_schema();
    cfg.methods = {"bootstrap"};
    cfg.rows = 300;
    const auto report = run_bench(cfg, seed_dataset(300, 3));
    const auto md = emit_markdown(report);
    CHECK(md.find("| Method | KS ↓ | Wasserstein ↓ | JS ↓ | TSTR ↑ |"
                  " Cat. Fidelity ↑ | DCR ↑ | ML Utility ↑ |") == 0);
    CHECK(md.find("| bootstrap | ") != std::string::npos);
    // bootstrap DCR renders as exactly 0.00
    CHECK(md.find(" 0.00 |") != std::string::npos);
}

TEST_CASE("kde export integrates to ~1 per curve") {
    const auto real = seed_dataset(500, 21);
    const auto synth = seed_dataset(500, 22);
    const auto csv = emit_kde(real, {{"x", &synth}});

    // parse back and trapezoid-integrate both densities
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "method,x,density_real,density_synth");
    std::vector<double> xs, dr, ds;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        xs.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        dr.push_back(std::stod(line.substr(c2 + 1, c3 - c2 - 1)));
        ds.push_back(std::stod(line.substr(c3 + 1)));
    }
    REQUIRE(xs.size() > 100);
    double ir = 0.0, is = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double dx = xs[i] - xs[i - 1];
        ir += 0.5 * (dr[i] + dr[i - 1]) * dx;
        is += 0.5 * (ds[i] + ds[i - 1]) * dx;
        CHECK(dr[i] >= 0.0);
        CHECK(ds[i] >= 0.0);
    }
    CHECK(std::abs(ir - 1.0) < 0.01);
    CHECK(std::abs(is - 1.0) < 0.01);
}

TEST_CASE("cli: bench with a missing config exits 1 naming the path") {
    CHECK(cli({"bench", "--config", "missing.toml"}) == 1);
}

TEST_CASE("cli: unknown flag exits 1") {
    CHECK(cli({"--frobnicate"}) == 1);
    CHECK(cli({"generate", "--method"}) == 1);
}

TEST_CASE("cli: seed-data + generate produce byte-identical files on repeat") {
    helpers::TempDir tmp("cli_gen");
    const auto seed_csv = tmp.path("real.csv");
    CHECK(cli({"seed-data", "--rows", "200", "--seed", "5", "--out", seed_csv.c_str()}) == 0);
    const auto first = helpers::read_file(seed_csv);
    CHECK(cli({"seed-data", "--rows", "200", "--seed", "5", "--out", seed_csv.c_str()}) == 0);
    CHECK(helpers::read_file(seed_csv) == first);

    const auto out1 = tmp.path("synth1.csv");
    const auto out2 = tmp.path("synth2.csv");
    for (const auto& out : {out1, out2}) {
        CHECK(cli({"generate", "--input", seed_csv.c_str(), "--method", "bootstrap", "--rows",
                   "100", "--seed", "7", "--out", out.c_str()}) == 0);
    }
    const auto g1 = helpers::read_file(out1);
    CHECK_FALSE(g1.empty());
    CHECK(g1 == helpers::read_file(out2));
}

TEST_CASE("cli: evaluate real vs itself reproduces the self-comparison identities") {
    helpers::TempDir tmp("cli_eval");
    const auto real_csv = tmp.path("real.csv");
    write_csv(seed_dataset(150, 9), real_csv);
    const auto json_path = tmp.path("report.json");
    const auto md_path = tmp.path("report.md");
    const auto kde_path = tmp.path("kde.csv");
    CHECK(cli({"evaluate", "--real", real_csv.c_str(), "--synth", real_csv.c_str(), "--json",
               json_path.c_str(), "--markdown", md_path.c_str(), "--kde",
               kde_path.c_str()}) == 0);

    const auto report = parse_report_json(helpers::read_file(json_path));
    REQUIRE(report.methods.size() == 1);
    const auto& m = report.methods[0];
    CHECK(m.fidelity.mean_ks == 0.0);
    CHECK(m.fidelity.mean_jsd == 0.0);
    CHECK(m.fidelity.mean_wasserstein == 0.0);
    CHECK(m.fidelity.categorical_fidelity == 1.0);
    CHECK(m.fidelity.dcr == 0.0);
    CHECK_FALSE(helpers::read_file(md_path).empty());
    CHECK_FALSE(helpers::read_file(kde_path).empty());
}

TEST_CASE("cli: bench end to end on a small config writes report files") {
    helpers::TempDir tmp("cli_bench");
    const auto out_dir = tmp.path("out");
    const std::string config = std::string(R"({
        "methods": ["bootstrap", "ros"],
        "seed_data": {"rows": 300, "seed": 6},
        "rows": 300,
        "seed": 17,
        "output_dir": ")") + out_dir + "\"}";
    const auto cfg_path = tmp.path("config.json");
    helpers::write_file(cfg_path, config);
    CHECK(cli({"bench", "--config", cfg_path.c_str()}) == 0);
    CHECK_FALSE(helpers::read_file(out_dir + "/report.json").empty());
    CHECK_FALSE(helpers::read_file(out_dir + "/report.md").empty());
    CHECK_FALSE(helpers::read_file(out_dir + "/kde.csv").empty());
}

TEST_CASE("method seeds derive from master seed and method name only") {
    CHECK(method_seed(42, "vae") == method_seed(42, "vae"));
    CHECK(method_seed(42, "vae") != method_seed(42, "dae"));
    CHECK(method_seed(42, "vae") != method_seed(43, "vae"));
}
