#include "synthbench/schema.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "synthbench/errors.hpp"

namespace synthbench {

std::size_t Schema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return i;
    }
    throw SchemaError("unknown column: " + name);
}

void Schema::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& col : columns) {
        if (!seen.insert(col.name).second) {
            throw SchemaError("duplicate column name: " + col.name);
        }
        if (col.is_categorical()) {
            const auto& levels = col.categorical().levels;
            if (levels.empty()) {
                throw SchemaError("categorical column has no levels: " + col.name);
            }
            std::unordered_set<std::string> lv(levels.begin(), levels.end());
            if (lv.size() != levels.size()) {
                throw SchemaError("duplicate levels in column: " + col.name);
            }
        } else {
            const auto& c = col.continuous();
            if (!(c.min < c.max)) {
                throw SchemaError("continuous column needs min < max: " + col.name);
            }
        }
    }
    if (!columns[index_of(class_target)].is_categorical()) {
        throw SchemaError("class target must be categorical: " + class_target);
    }
    if (columns[index_of(regression_target)].is_categorical()) {
        throw SchemaError("regression target must be continuous: " + regression_target);
    }
}

Table::Table(Schema schema) : schema_(std::move(schema)) {
    columns_.reserve(schema_.columns.size());
    for (const auto& col : schema_.columns) {
        if (col.is_categorical()) {
            columns_.emplace_back(std::vector<std::int32_t>{});
        } else {
            columns_.emplace_back(std::vector<double>{});
        }
    }
}

std::vector<double>& Table::cont(std::size_t col) {
    return std::get<std::vector<double>>(columns_[col]);
}
const std::vector<double>& Table::cont(std::size_t col) const {
    return std::get<std::vector<double>>(columns_[col]);
}
std::vector<std::int32_t>& Table::cat(std::size_t col) {
    return std::get<std::vector<std::int32_t>>(columns_[col]);
}
const std::vector<std::int32_t>& Table::cat(std::size_t col) const {
    return std::get<std::vector<std::int32_t>>(columns_[col]);
}

void Table::resize_rows(std::size_t n) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (schema_.columns[c].is_categorical()) {
            cat(c).resize(n, 0);
        } else {
            cont(c).resize(n, 0.0);
        }
    }
    n_rows_ = n;
}

void Table::append_row_from(const Table& src, std::size_t src_row) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (schema_.columns[c].is_categorical()) {
            cat(c).push_back(src.cat(c)[src_row]);
        } else {
            cont(c).push_back(src.cont(c)[src_row]);
        }
    }
    ++n_rows_;
}

bool Table::rows_equal(std::size_t i, const Table& other, std::size_t j) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (schema_.columns[c].is_categorical()) {
            if (cat(c)[i] != other.cat(c)[j]) return false;
        } else {
            if (cont(c)[i] != other.cont(c)[j]) return false;
        }
    }
    return true;
}

void Table::validate_cells(double tol, bool check_integer) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        const auto& col = schema_.columns[c];
        if (col.is_categorical()) {
            const auto n_levels = static_cast<std::int32_t>(col.categorical().levels.size());
            for (auto v : cat(c)) {
                if (v < 0 || v >= n_levels) {
                    throw DomainError("level index out of range in column " + col.name);
                }
            }
        } else {
            const auto& k = col.continuous();
            for (double v : cont(c)) {
                if (!(v >= k.min - tol && v <= k.max + tol)) {
                    throw DomainError("value out of domain in column " + col.name);
                }
                if (check_integer && k.integer_valued && std::abs(v - std::round(v)) > tol) {
                    throw DomainError("non-integer value in integer column " + col.name);
                }
            }
        }
    }
}

bool Table::equals(const Table& other, double cont_tol) const {
    if (n_rows_ != other.n_rows_ || schema_.columns.size() != other.schema_.columns.size()) {
        return false;
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (schema_.columns[c].is_categorical() != other.schema_.columns[c].is_categorical()) {
            return false;
        }
        if (schema_.columns[c].is_categorical()) {
            if (cat(c) != other.cat(c)) return false;
        } else {
            const auto& a = cont(c);
            const auto& b = other.cont(c);
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
                if (std::abs(a[i] - b[i]) > cont_tol * scale) return false;
            }
        }
    }
    return true;
}

Schema student_schema() {
    Schema s;
    s.columns = {
        {"Gender", CategoricalKind{{"Male", "Female"}}},
        {"RaceEthnicity", CategoricalKind{{"A", "B", "C", "D", "E"}}},
        {"ParentalEducation",
         CategoricalKind{{"Some High School", "High School", "Some College", "Associate's",
                          "Bachelor's", "Master's"}}},
        {"Lunch", CategoricalKind{{"0", "1"}}},
        {"TestPrep", CategoricalKind{{"0", "1"}}},
        {"Math", ContinuousKind{0.0, 100.0, true}},
        {"Reading", ContinuousKind{0.0, 100.0, true}},
        {"Writing", ContinuousKind{0.0, 100.0, true}},
        {"Science", ContinuousKind{0.0, 100.0, true}},
        {"TotalScore", ContinuousKind{0.0, 400.0, true}},
    };
    s.class_target = "RaceEthnicity";
    s.regression_target = "TotalScore";
    return s;
}

}  // namespace synthbench
