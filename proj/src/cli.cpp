#include "synthbench/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synthbench/bench.hpp"
#include "synthbench/csv.hpp"
#include "synthbench/errors.hpp"
#include "synthbench/metrics.hpp"
#include "synthbench/seed_data.hpp"
#include "synthbench/utility.hpp"

namespace synthbench {

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << text;
    if (!out) throw IoError("error writing file: " + path);
}

int cmd_seed_data(std::size_t rows, std::uint64_t seed, const std::string& out_path) {
    write_csv(seed_dataset(rows, seed), out_path);
    return 0;
}

int cmd_generate(const std::string& input, const std::string& schema_path,
                 const std::string& method, std::size_t rows, std::uint64_t seed,
                 const std::string& out_path) {
    const Schema schema = parse_schema_file(schema_path);
    const auto loaded = load_csv(input, schema);
    if (loaded.table.n_rows() == 0) throw ConfigError("input has no usable rows: " + input);
    const Table synth = generate_with_method(method, loaded.table, rows, seed, {});
    write_csv(synth, out_path);
    return 0;
}

int cmd_evaluate(const std::string& real_path, const std::string& synth_path,
                 const std::string& schema_path, std::string class_target,
                 std::string reg_target, std::uint64_t seed, const std::string& json_path,
                 const std::string& markdown_path, const std::string& kde_path) {
    Schema schema = parse_schema_file(schema_path);
    if (!class_target.empty()) schema.class_target = class_target;
    if (!reg_target.empty()) schema.regression_target = reg_target;
    schema.validate();

    const Table real = load_csv(real_path, schema).table;
    const Table synth = load_csv(synth_path, schema).table;
    if (real.n_rows() == 0 || synth.n_rows() == 0) {
        throw ConfigError("evaluate: empty real or synthetic table");
    }

    MethodReport mr;
    mr.name = "evaluate";
    mr.fidelity = compute_fidelity(real, synth);
    mr.tstr = tstr(synth, real, schema.class_target, schema.regression_target, seed);

    RunReport report;
    report.config_hash = "0";
    report.real_rows = real.n_rows();
    report.real_source = real_path;
    report.methods.push_back(std::move(mr));

    write_text(json_path, emit_json(report));
    if (!markdown_path.empty()) write_text(markdown_path, emit_markdown(report));
    if (!kde_path.empty()) write_text(kde_path, emit_kde(real, {{"evaluate", &synth}}));
    return 0;
}

int cmd_bench(const std::string& config_path) {
    const BenchmarkConfig cfg = parse_config(config_path);
    Table real;
    if (!cfg.input_csv.empty()) {
        real = load_csv(cfg.input_csv, cfg.schema).table;
    } else {
        real = seed_dataset(cfg.seed_data->rows, cfg.seed_data->seed);
    }
    std::vector<Table> synths;
    const RunReport report = run_bench(cfg, real, &synths);

    std::string out_dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/report.json", emit_json(report));
    write_text(out_dir + "/report.md", emit_markdown(report));
    if (cfg.kde) {
        std::vector<std::pair<std::string, const Table*>> refs;
        for (std::size_t i = 0; i < report.methods.size(); ++i) {
            if (report.methods[i].failed) continue;
            refs.emplace_back(report.methods[i].name, &synths[i]);
        }
        write_text(out_dir + "/kde.csv", emit_kde(real, refs));
    }
    for (const auto& m : report.methods) {
        if (m.failed) {
            std::cerr << "method " << m.name << " failed: " << m.error << "\n";
        }
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"synthbench: synthetic student-data generation and evaluation"};
    app.require_subcommand(1);

    // seed-data
    auto* seed_cmd = app.add_subcommand("seed-data", "Write a deterministic stand-in dataset");
    std::size_t sd_rows = 10000;
    std::uint64_t sd_seed = 42;
    std::string sd_out;
    seed_cmd->add_option("--rows", sd_rows, "Number of rows")->check(CLI::PositiveNumber);
    seed_cmd->add_option("--seed", sd_seed, "RNG seed");
    seed_cmd->add_option("--out", sd_out, "Output CSV path")->required();

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic table from a real CSV");
    std::string g_input, g_schema, g_method, g_out;
    std::size_t g_rows = 10000;
    std::uint64_t g_seed = 42;
    gen_cmd->add_option("--input", g_input, "Real data CSV")->required();
    gen_cmd->add_option("--schema", g_schema, "Schema JSON file or 'student'");
    gen_cmd->add_option("--method", g_method, "smote|bootstrap|ros|dae|vae|copulagan")->required();
    gen_cmd->add_option("--rows", g_rows, "Synthetic rows")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", g_seed, "RNG seed");
    gen_cmd->add_option("--out", g_out, "Output CSV path")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a real/synthetic pair");
    std::string e_real, e_synth, e_schema, e_class, e_reg, e_json, e_md, e_kde;
    std::uint64_t e_seed = 42;
    eval_cmd->add_option("--real", e_real, "Real data CSV")->required();
    eval_cmd->add_option("--synth", e_synth, "Synthetic data CSV")->required();
    eval_cmd->add_option("--schema", e_schema, "Schema JSON file or 'student'");
    eval_cmd->add_option("--class-target", e_class, "Classification target column");
    eval_cmd->add_option("--reg-target", e_reg, "Regression target column");
    eval_cmd->add_option("--seed", e_seed, "Holdout/forest seed");
    eval_cmd->add_option("--json", e_json, "Report JSON output path")->required();
    eval_cmd->add_option("--markdown", e_md, "Optional Markdown output path");
    eval_cmd->add_option("--kde", e_kde, "Optional KDE CSV output path");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the full benchmark from a config file");
    std::string b_config;
    bench_cmd->add_option("--config", b_config, "Benchmark config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cerr << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (*seed_cmd) return cmd_seed_data(sd_rows, sd_seed, sd_out);
        if (*gen_cmd) return cmd_generate(g_input, g_schema, g_method, g_rows, g_seed, g_out);
        if (*eval_cmd) {
            return cmd_evaluate(e_real, e_synth, e_schema, e_class, e_reg, e_seed, e_json, e_md,
                                e_kde);
        }
        if (*bench_cmd) return cmd_bench(b_config);
        std::cerr << app.help();
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace synthbench
