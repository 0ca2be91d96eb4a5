#include "synthbench/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "synthbench/csv.hpp"
#include "synthbench/encoding.hpp"
#include "synthbench/errors.hpp"
#include "synthbench/generators.hpp"
#include "synthbench/resample.hpp"
#include "synthbench/rng.hpp"
#include "synthbench/seed_data.hpp"

namespace synthbench {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownMethods = {"smote", "bootstrap", "ros",
                                                "dae",   "vae",       "copulagan"};

bool known_method(const std::string& m) {
    return std::find(kKnownMethods.begin(), kKnownMethods.end(), m) != kKnownMethods.end();
}

Schema schema_from_json(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "student" || name == "default") return student_schema();
        throw ConfigError("unknown schema name: " + name);
    }
    Schema s;
    for (const auto& col : j.at("columns")) {
        Column c;
        c.name = col.at("name").get<std::string>();
        const auto kind = col.at("kind").get<std::string>();
        if (kind == "categorical") {
            CategoricalKind k;
            for (const auto& lv : col.at("levels")) k.levels.push_back(lv.get<std::string>());
            c.kind = k;
        } else if (kind == "continuous") {
            ContinuousKind k;
            k.min = col.at("min").get<double>();
            k.max = col.at("max").get<double>();
            k.integer_valued = col.value("integer", false);
            c.kind = k;
        } else {
            throw ConfigError("unknown column kind: " + kind);
        }
        s.columns.push_back(std::move(c));
    }
    s.class_target = j.value("class_target", std::string{});
    s.regression_target = j.value("regression_target", std::string{});
    return s;
}

MethodOverrides overrides_from_json(const json& j) {
    MethodOverrides o;
    if (j.contains("epochs")) o.epochs = j.at("epochs").get<std::size_t>();
    if (j.contains("batch_size")) o.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("learning_rate")) o.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("k_neighbors")) o.k_neighbors = j.at("k_neighbors").get<std::size_t>();
    if (j.contains("n_bootstrap_replicates")) {
        o.n_bootstrap_replicates = j.at("n_bootstrap_replicates").get<std::size_t>();
    }
    return o;
}

// Locale-independent fixed-point formatting.
std::string format_fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, 16);
    return std::string(buf, ptr);
}

json fidelity_to_json(const FidelityReport& f) {
    json cols = json::array();
    for (const auto& c : f.columns) {
        json jc;
        jc["name"] = c.name;
        jc["jsd"] = c.jsd;
        if (c.continuous) {
            jc["ks"] = c.ks;
            jc["ks_pvalue"] = c.ks_pvalue;
            jc["wasserstein"] = c.wasserstein;
        }
        cols.push_back(std::move(jc));
    }
    return json{{"columns", std::move(cols)},
                {"mean_ks", f.mean_ks},
                {"mean_wasserstein", f.mean_wasserstein},
                {"mean_jsd", f.mean_jsd},
                {"categorical_fidelity", f.categorical_fidelity},
                {"dcr", f.dcr}};
}

FidelityReport fidelity_from_json(const json& j) {
    FidelityReport f;
    for (const auto& jc : j.at("columns")) {
        ColumnMetrics c;
        c.name = jc.at("name").get<std::string>();
        c.jsd = jc.at("jsd").get<double>();
        c.continuous = jc.contains("ks");
        if (c.continuous) {
            c.ks = jc.at("ks").get<double>();
            c.ks_pvalue = jc.at("ks_pvalue").get<double>();
            c.wasserstein = jc.at("wasserstein").get<double>();
        }
        f.columns.push_back(std::move(c));
    }
    f.mean_ks = j.at("mean_ks").get<double>();
    f.mean_wasserstein = j.at("mean_wasserstein").get<double>();
    f.mean_jsd = j.at("mean_jsd").get<double>();
    f.categorical_fidelity = j.at("categorical_fidelity").get<double>();
    f.dcr = j.at("dcr").get<double>();
    return f;
}

json tstr_to_json(const TSTRResult& t) {
    return json{{"classification_accuracy", t.classification_accuracy},
                {"regression_r2", t.regression_r2},
                {"regression_mae", t.regression_mae},
                {"ml_utility", t.ml_utility},
                {"baseline_accuracy", t.baseline_accuracy},
                {"baseline_r2", t.baseline_r2},
                {"baseline_mae", t.baseline_mae},
                {"baseline_utility", t.baseline_utility}};
}

TSTRResult tstr_from_json(const json& j) {
    TSTRResult t;
    t.classification_accuracy = j.at("classification_accuracy").get<double>();
    t.regression_r2 = j.at("regression_r2").get<double>();
    t.regression_mae = j.at("regression_mae").get<double>();
    t.ml_utility = j.at("ml_utility").get<double>();
    t.baseline_accuracy = j.at("baseline_accuracy").get<double>();
    t.baseline_r2 = j.at("baseline_r2").get<double>();
    t.baseline_mae = j.at("baseline_mae").get<double>();
    t.baseline_utility = j.at("baseline_utility").get<double>();
    return t;
}

}  // namespace

void BenchmarkConfig::validate() const {
    if (methods.empty()) throw ConfigError("config: methods must not be empty");
    for (const auto& m : methods) {
        if (!known_method(m)) throw ConfigError("config: unknown method '" + m + "'");
    }
    if (rows == 0) throw ConfigError("config: rows must be >= 1");
    if (input_csv.empty() && !seed_data) {
        throw ConfigError("config: either input_csv or seed_data is required");
    }
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw ConfigError("config: holdout_fraction must be in (0,1)");
    }
    schema.validate();
}

BenchmarkConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + origin + ": " + e.what());
    }
    try {
        BenchmarkConfig cfg;
        cfg.schema = j.contains("schema") ? schema_from_json(j.at("schema")) : student_schema();
        if (cfg.schema.class_target.empty()) cfg.schema.class_target = student_schema().class_target;
        if (cfg.schema.regression_target.empty()) {
            cfg.schema.regression_target = student_schema().regression_target;
        }
        if (j.contains("class_target")) cfg.schema.class_target = j.at("class_target");
        if (j.contains("regression_target")) cfg.schema.regression_target = j.at("regression_target");
        cfg.input_csv = j.value("input_csv", std::string{});
        if (j.contains("seed_data")) {
            SeedDataSpec spec;
            spec.rows = j.at("seed_data").value("rows", 10000u);
            spec.seed = j.at("seed_data").value("seed", 42u);
            cfg.seed_data = spec;
        }
        for (const auto& m : j.at("methods")) cfg.methods.push_back(m.get<std::string>());
        cfg.rows = j.value("rows", 10000u);
        cfg.master_seed = j.value("seed", 42u);
        cfg.output_dir = j.value("output_dir", std::string{});
        cfg.holdout_fraction = j.value("holdout_fraction", 0.30);
        cfg.kde = j.value("kde", true);
        if (j.contains("overrides")) {
            for (const auto& [name, jo] : j.at("overrides").items()) {
                if (!known_method(name)) {
                    throw ConfigError("config: overrides for unknown method '" + name + "'");
                }
                cfg.overrides[name] = overrides_from_json(jo);
            }
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError("config " + origin + ": " + e.what());
    }
}

BenchmarkConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

Schema parse_schema_file(const std::string& path) {
    if (path.empty() || path == "student" || path == "default") return student_schema();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("schema file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        Schema s = schema_from_json(json::parse(buf.str()));
        if (s.class_target.empty()) s.class_target = student_schema().class_target;
        if (s.regression_target.empty()) s.regression_target = student_schema().regression_target;
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ConfigError("schema " + path + ": " + e.what());
    }
}

std::uint64_t method_seed(std::uint64_t master_seed, const std::string& method) {
    return derive_seed(master_seed, "method:" + method);
}

Table generate_with_method(const std::string& method, const Table& real, std::size_t rows,
                           std::uint64_t seed, const MethodOverrides& overrides) {
    if (!known_method(method)) throw ConfigError("unknown method '" + method + "'");
    if (rows == 0) throw DomainError("generate: rows must be >= 1");

    if (method == "smote" || method == "bootstrap" || method == "ros") {
        ResampleConfig cfg;
        cfg.target_rows = rows;
        cfg.seed = seed;
        if (overrides.k_neighbors) cfg.k_neighbors = *overrides.k_neighbors;
        if (overrides.n_bootstrap_replicates) {
            cfg.n_bootstrap_replicates = *overrides.n_bootstrap_replicates;
        }
        if (method == "smote") return smote(real, real.schema().class_target, cfg);
        if (method == "bootstrap") return bootstrap(real, cfg);
        return random_oversample(real, real.schema().class_target, cfg);
    }

    const EncodedMatrix encoded = fit_encoding(real);
    GenTrainConfig cfg = method == "dae"   ? GenTrainConfig::dae_defaults()
                         : method == "vae" ? GenTrainConfig::vae_defaults()
                                           : GenTrainConfig::copulagan_defaults();
    cfg.seed = derive_seed(seed, "fit");
    if (overrides.epochs) cfg.epochs = *overrides.epochs;
    if (overrides.batch_size) cfg.batch_size = *overrides.batch_size;
    if (overrides.learning_rate) cfg.learning_rate = *overrides.learning_rate;
    const std::uint64_t gen_seed = derive_seed(seed, "generate");

    if (method == "dae") {
        const auto model = dae_fit(encoded, cfg);
        return dae_generate(model, rows, gen_seed);
    }
    if (method == "vae") {
        const auto model = vae_fit(encoded, cfg);
        return vae_generate(model, rows, gen_seed);
    }
    const auto model = copulagan_fit(encoded, cfg);
    return copulagan_generate(model, rows, gen_seed);
}

RunReport run_bench(const BenchmarkConfig& cfg, const Table& real,
                    std::vector<Table>* synth_out) {
    cfg.validate();
    RunReport report;
    {
        // canonical key-sorted dump of the config for the hash
        json j;
        j["methods"] = cfg.methods;
        j["rows"] = cfg.rows;
        j["seed"] = cfg.master_seed;
        j["input_csv"] = cfg.input_csv;
        if (cfg.seed_data) {
            j["seed_data"] = {{"rows", cfg.seed_data->rows}, {"seed", cfg.seed_data->seed}};
        }
        j["class_target"] = cfg.schema.class_target;
        j["regression_target"] = cfg.schema.regression_target;
        j["holdout_fraction"] = cfg.holdout_fraction;
        json jo;
        for (const auto& [name, o] : cfg.overrides) {
            json one;
            if (o.epochs) one["epochs"] = *o.epochs;
            if (o.batch_size) one["batch_size"] = *o.batch_size;
            if (o.learning_rate) one["learning_rate"] = *o.learning_rate;
            if (o.k_neighbors) one["k_neighbors"] = *o.k_neighbors;
            if (o.n_bootstrap_replicates) one["n_bootstrap_replicates"] = *o.n_bootstrap_replicates;
            jo[name] = std::move(one);
        }
        j["overrides"] = std::move(jo);
        report.config_hash = hex64(derive_seed(0x5b3a9cULL, j.dump()));
    }
    report.real_rows = real.n_rows();
    report.real_source = cfg.input_csv.empty() ? "seed_dataset" : cfg.input_csv;

    for (const auto& method : cfg.methods) {
        MethodReport mr;
        mr.name = method;
        mr.derived_seed = method_seed(cfg.master_seed, method);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            MethodOverrides overrides;
            if (auto it = cfg.overrides.find(method); it != cfg.overrides.end()) {
                overrides = it->second;
            }
            Table synth = generate_with_method(method, real, cfg.rows, mr.derived_seed,
                                               overrides);
            mr.fidelity = compute_fidelity(real, synth);
            mr.tstr = tstr(synth, real, cfg.schema.class_target, cfg.schema.regression_target,
                           derive_seed(cfg.master_seed, "tstr"));
            if (synth_out) synth_out->push_back(std::move(synth));
        } catch (const std::exception& e) {
            mr.failed = true;
            mr.error = e.what();
            if (synth_out) synth_out->emplace_back();
        }
        mr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.methods.push_back(std::move(mr));
    }
    return report;
}

RunReport run_bench(const BenchmarkConfig& cfg) {
    cfg.validate();
    Table real;
    if (!cfg.input_csv.empty()) {
        real = load_csv(cfg.input_csv, cfg.schema).table;
    } else {
        real = seed_dataset(cfg.seed_data->rows, cfg.seed_data->seed);
    }
    return run_bench(cfg, real);
}

std::string emit_markdown(const RunReport& report) {
    std::string out;
    out += "| Method | KS \xE2\x86\x93 | Wasserstein \xE2\x86\x93 | JS \xE2\x86\x93 | TSTR \xE2\x86\x91 |"
           " Cat. Fidelity \xE2\x86\x91 | DCR \xE2\x86\x91 | ML Utility \xE2\x86\x91 |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (const auto& m : report.methods) {
        if (m.failed) {
            out += "| " + m.name + " | error: " + m.error + " | | | | | | |\n";
            continue;
        }
        out += "| " + m.name + " | " + format_fixed(m.fidelity.mean_ks, 2) + " | " +
               format_fixed(m.fidelity.mean_wasserstein, 2) + " | " +
               format_fixed(m.fidelity.mean_jsd, 2) + " | " +
               format_fixed(m.tstr.classification_accuracy, 3) + " | " +
               format_fixed(m.fidelity.categorical_fidelity, 3) + " | " +
               format_fixed(m.fidelity.dcr, 2) + " | " + format_fixed(m.tstr.ml_utility, 2) +
               " |\n";
    }
    return out;
}

std::string emit_json(const RunReport& report) {
    json j;
    j["version"] = report.version;
    j["toolkit_version"] = report.toolkit_version;
    j["config_hash"] = report.config_hash;
    j["real"] = {{"rows", report.real_rows}, {"source", report.real_source}};
    json methods = json::array();
    json timing;
    for (const auto& m : report.methods) {
        json jm;
        jm["name"] = m.name;
        jm["seed"] = hex64(m.derived_seed);
        if (m.failed) {
            jm["error"] = m.error;
        } else {
            jm["fidelity"] = fidelity_to_json(m.fidelity);
            jm["tstr"] = tstr_to_json(m.tstr);
        }
        methods.push_back(std::move(jm));
        timing[m.name] = m.seconds;
    }
    j["methods"] = std::move(methods);
    j["timing"] = std::move(timing);  // excluded from determinism comparisons
    return j.dump(2) + "\n";
}

RunReport parse_report_json(const std::string& text) {
    const json j = json::parse(text);
    RunReport r;
    r.version = j.at("version").get<std::string>();
    r.toolkit_version = j.at("toolkit_version").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.real_rows = j.at("real").at("rows").get<std::size_t>();
    r.real_source = j.at("real").at("source").get<std::string>();
    for (const auto& jm : j.at("methods")) {
        MethodReport m;
        m.name = jm.at("name").get<std::string>();
        m.derived_seed = std::stoull(jm.at("seed").get<std::string>(), nullptr, 16);
        if (jm.contains("error")) {
            m.failed = true;
            m.error = jm.at("error").get<std::string>();
        } else {
            m.fidelity = fidelity_from_json(jm.at("fidelity"));
            m.tstr = tstr_from_json(jm.at("tstr"));
        }
        if (j.contains("timing") && j.at("timing").contains(m.name)) {
            m.seconds = j.at("timing").at(m.name).get<double>();
        }
        r.methods.push_back(std::move(m));
    }
    return r;
}

std::string emit_kde(const Table& real,
                     const std::vector<std::pair<std::string, const Table*>>& synths) {
    const std::size_t col = real.schema().index_of(real.schema().regression_target);

    auto silverman = [](const std::vector<double>& xs) {
        std::vector<double> s = xs;
        std::sort(s.begin(), s.end());
        const double n = static_cast<double>(s.size());
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : s) var += (v - mean) * (v - mean);
        var /= n;
        const double sd = std::sqrt(var);
        const double q1 = s[static_cast<std::size_t>(0.25 * (n - 1))];
        const double q3 = s[static_cast<std::size_t>(0.75 * (n - 1))];
        const double iqr = q3 - q1;
        double spread = sd;
        if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
        if (spread <= 0.0) spread = 1.0;
        return 0.9 * spread * std::pow(n, -0.2);
    };

    auto density = [](const std::vector<double>& xs, double h, double x) {
        const double inv = 1.0 / (h * 2.5066282746310005);  // sqrt(2*pi)
        double sum = 0.0;
        for (double v : xs) {
            const double u = (x - v) / h;
            sum += std::exp(-0.5 * u * u);
        }
        return sum * inv / static_cast<double>(xs.size());
    };

    const std::vector<double>& real_col = real.cont(col);
    std::string out = "method,x,density_real,density_synth\n";
    for (const auto& [name, synth] : synths) {
        const std::vector<double>& synth_col = synth->cont(col);
        const double h_real = silverman(real_col);
        const double h_synth = silverman(synth_col);
        double lo = real_col[0], hi = real_col[0];
        for (double v : real_col) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (double v : synth_col) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double pad = 4.0 * std::max(h_real, h_synth);
        lo -= pad;
        hi += pad;
        constexpr std::size_t kGrid = 512;
        for (std::size_t i = 0; i < kGrid; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(kGrid - 1);
            out += name;
            out.push_back(',');
            out += format_fixed(x, 6);
            out.push_back(',');
            out += format_fixed(density(real_col, h_real, x), 9);
            out.push_back(',');
            out += format_fixed(density(synth_col, h_synth, x), 9);
            out.push_back('\n');
        }
    }
    return out;
}

}  // namespace synthbench
