#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthbench/metrics.hpp"
#include "synthbench/schema.hpp"
#include "synthbench/utility.hpp"

namespace synthbench {

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr const char* kReportSchemaVersion = "1";

struct MethodOverrides {
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch_size;
    std::optional<double> learning_rate;
    std::optional<std::size_t> k_neighbors;
    std::optional<std::size_t> n_bootstrap_replicates;
};

struct SeedDataSpec {
    std::size_t rows = 10000;
    std::uint64_t seed = 42;
};

struct BenchmarkConfig {
    std::string input_csv;                  // empty when seed_data is used
    std::optional<SeedDataSpec> seed_data;
    Schema schema;
    std::vector<std::string> methods;  // subset of smote|bootstrap|ros|dae|vae|copulagan
    std::size_t rows = 10000;
    std::uint64_t master_seed = 42;
    std::string output_dir;
    std::map<std::string, MethodOverrides> overrides;
    double holdout_fraction = 0.30;
    bool kde = true;

    void validate() const;  // throws ConfigError
};

// Parses the documented JSON key set; schema may be "student" or inline.
BenchmarkConfig parse_config(const std::string& path);
BenchmarkConfig parse_config_text(const std::string& text, const std::string& origin);

// JSON schema file ({"columns": [...], "class_target": ..., ...}); the string
// "student" (or "default") names the built-in schema.
Schema parse_schema_file(const std::string& path);

struct MethodReport {
    std::string name;
    std::uint64_t derived_seed = 0;
    bool failed = false;
    std::string error;
    FidelityReport fidelity;
    TSTRResult tstr;
    double seconds = 0.0;
};

struct RunReport {
    std::string version = kReportSchemaVersion;
    std::string toolkit_version = kToolkitVersion;
    std::string config_hash;
    std::size_t real_rows = 0;
    std::string real_source;
    std::vector<MethodReport> methods;
};

// One synthetic table by method name, using the method's defaults plus
// overrides; shared by the CLI `generate` subcommand and run_bench.
Table generate_with_method(const std::string& method, const Table& real, std::size_t rows,
                           std::uint64_t seed, const MethodOverrides& overrides);

// Derived per-method seed = hash(master seed, method name).
std::uint64_t method_seed(std::uint64_t master_seed, const std::string& method);

// Generates, evaluates and times every configured method against the real
// data; a method failure becomes an error entry and the others still run.
// When synth_out is non-null it receives one table per method (empty on
// failure), e.g. for KDE export.
RunReport run_bench(const BenchmarkConfig& cfg, const Table& real,
                    std::vector<Table>* synth_out = nullptr);
// Loads the real table per config (input_csv or seed_data) and runs.
RunReport run_bench(const BenchmarkConfig& cfg);

// Table-2 style Markdown: Method | KS | Wasserstein | JS | TSTR |
// Cat. Fidelity | DCR | ML Utility, locale-independent formatting.
std::string emit_markdown(const RunReport& report);
// Versioned JSON; wall-clock timings live in a separate "timing" section so
// determinism checks can exclude them.
std::string emit_json(const RunReport& report);
RunReport parse_report_json(const std::string& text);

// KDE curves (Gaussian kernel, Silverman bandwidth) of the regression target
// for real vs. each synthetic table. CSV columns: method,x,density_real,density_synth.
std::string emit_kde(const Table& real,
                     const std::vector<std::pair<std::string, const Table*>>& synths);

}  // namespace synthbench
