#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "synthbench/bench.hpp"
#include "synthbench/csv.hpp"
#include "synthbench/metrics.hpp"
#include "synthbench/schema.hpp"
#include "synthbench/seed_data.hpp"
#include "synthbench/utility.hpp"

namespace py = pybind11;
using namespace synthbench;

namespace {

py::object cell(const Table& t, std::size_t col, std::size_t row) {
    if (t.schema().columns[col].is_categorical()) {
        const auto& levels = t.schema().columns[col].categorical().levels;
        return py::str(levels[static_cast<std::size_t>(t.cat(col)[row])]);
    }
    return py::float_(t.cont(col)[row]);
}

py::dict fidelity_dict(const FidelityReport& f) {
    py::dict d;
    d["mean_ks"] = f.mean_ks;
    d["mean_wasserstein"] = f.mean_wasserstein;
    d["mean_jsd"] = f.mean_jsd;
    d["categorical_fidelity"] = f.categorical_fidelity;
    d["dcr"] = f.dcr;
    py::dict cols;
    for (const auto& c : f.columns) {
        py::dict cd;
        cd["jsd"] = c.jsd;
        if (c.continuous) {
            cd["ks"] = c.ks;
            cd["ks_pvalue"] = c.ks_pvalue;
            cd["wasserstein"] = c.wasserstein;
        }
        cols[py::str(c.name)] = cd;
    }
    d["columns"] = cols;
    return d;
}

py::dict tstr_dict(const TSTRResult& t) {
    py::dict d;
    d["classification_accuracy"] = t.classification_accuracy;
    d["regression_r2"] = t.regression_r2;
    d["regression_mae"] = t.regression_mae;
    d["ml_utility"] = t.ml_utility;
    d["baseline_accuracy"] = t.baseline_accuracy;
    d["baseline_r2"] = t.baseline_r2;
    d["baseline_mae"] = t.baseline_mae;
    d["baseline_utility"] = t.baseline_utility;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "synthbench core: synthetic tabular data generation and evaluation";

    py::class_<Schema>(m, "Schema")
        .def_static("student", &student_schema)
        .def_property_readonly("column_names",
                               [](const Schema& s) {
                                   std::vector<std::string> names;
                                   for (const auto& c : s.columns) names.push_back(c.name);
                                   return names;
                               })
        .def_readwrite("class_target", &Schema::class_target)
        .def_readwrite("regression_target", &Schema::regression_target);

    py::class_<Table>(m, "Table")
        .def_property_readonly("n_rows", &Table::n_rows)
        .def_property_readonly("schema", &Table::schema)
        .def("rows",
             [](const Table& t) {
                 py::list rows;
                 for (std::size_t r = 0; r < t.n_rows(); ++r) {
                     py::list row;
                     for (std::size_t c = 0; c < t.n_cols(); ++c) row.append(cell(t, c, r));
                     rows.append(row);
                 }
                 return rows;
             })
        .def("column",
             [](const Table& t, const std::string& name) {
                 const std::size_t c = t.schema().index_of(name);
                 py::list out;
                 for (std::size_t r = 0; r < t.n_rows(); ++r) out.append(cell(t, c, r));
                 return out;
             });

    m.def("seed_dataset", &seed_dataset, py::arg("n_rows"), py::arg("seed"),
          py::arg("total_is_sum") = true);

    m.def(
        "load_csv",
        [](const std::string& path, const Schema* schema) {
            const auto res = load_csv(path, schema ? *schema : student_schema());
            py::dict rep;
            rep["rows_loaded"] = res.report.rows_loaded;
            rep["dropped_missing"] = res.report.dropped_missing;
            rep["dropped_invalid"] = res.report.dropped_invalid;
            rep["dropped_duplicates"] = res.report.dropped_duplicates;
            return py::make_tuple(res.table, rep);
        },
        py::arg("path"), py::arg("schema") = nullptr);

    m.def("write_csv", &write_csv, py::arg("table"), py::arg("path"));

    m.def(
        "generate",
        [](const Table& real, const std::string& method, std::size_t rows, std::uint64_t seed) {
            return generate_with_method(method, real, rows, seed, {});
        },
        py::arg("real"), py::arg("method"), py::arg("rows"), py::arg("seed") = 42,
        "Generate synthetic rows with smote|bootstrap|ros|dae|vae|copulagan");

    m.def(
        "evaluate",
        [](const Table& real, const Table& synth, std::uint64_t seed) {
            py::dict d;
            d["fidelity"] = fidelity_dict(compute_fidelity(real, synth));
            d["tstr"] = tstr_dict(tstr(synth, real, real.schema().class_target,
                                       real.schema().regression_target, seed));
            return d;
        },
        py::arg("real"), py::arg("synth"), py::arg("seed") = 42,
        "Full fidelity + TSTR evaluation of a real/synthetic pair");

    m.def(
        "run_bench",
        [](const std::string& config_path) {
            const auto report = run_bench(parse_config(config_path));
            return emit_json(report);
        },
        py::arg("config_path"), "Run the benchmark; returns the report JSON as a string");

    m.attr("__version__") = kToolkitVersion;
}
