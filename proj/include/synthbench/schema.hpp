#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace synthbench {

struct CategoricalKind {
    std::vector<std::string> levels;  // declaration order defines one-hot order

    bool operator==(const CategoricalKind&) const = default;
};

struct ContinuousKind {
    double min = 0.0;
    double max = 1.0;
    bool integer_valued = false;

    bool operator==(const ContinuousKind&) const = default;
};

using ColumnKind = std::variant<CategoricalKind, ContinuousKind>;

struct Column {
    std::string name;
    ColumnKind kind;

    bool is_categorical() const { return std::holds_alternative<CategoricalKind>(kind); }
    const CategoricalKind& categorical() const { return std::get<CategoricalKind>(kind); }
    const ContinuousKind& continuous() const { return std::get<ContinuousKind>(kind); }

    bool operator==(const Column&) const = default;
};

struct Schema {
    std::vector<Column> columns;
    std::string class_target;       // must name a categorical column
    std::string regression_target;  // must name a continuous column

    std::size_t index_of(const std::string& name) const;  // throws SchemaError if absent
    // Checks name uniqueness, target kinds, level/domain invariants. Throws SchemaError.
    void validate() const;

    bool operator==(const Schema&) const = default;
};

// Per-column cell storage: level index for categorical, value for continuous.
using ColumnData = std::variant<std::vector<double>, std::vector<std::int32_t>>;

class Table {
public:
    Table() = default;
    explicit Table(Schema schema);

    const Schema& schema() const { return schema_; }
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return schema_.columns.size(); }

    std::vector<double>& cont(std::size_t col);
    const std::vector<double>& cont(std::size_t col) const;
    std::vector<std::int32_t>& cat(std::size_t col);
    const std::vector<std::int32_t>& cat(std::size_t col) const;

    // Appends one empty row; callers fill cells via cont()/cat(). Prefer the helpers below.
    void resize_rows(std::size_t n);
    void append_row_from(const Table& src, std::size_t src_row);
    bool rows_equal(std::size_t i, const Table& other, std::size_t j) const;

    // Domain conformance: levels in range, continuous within [min,max] (+tol),
    // integer-valued columns whole. Throws DomainError on violation.
    void validate_cells(double tol = 1e-9, bool check_integer = true) const;

    bool equals(const Table& other, double cont_tol = 0.0) const;

private:
    Schema schema_;
    std::vector<ColumnData> columns_;
    std::size_t n_rows_ = 0;
};

// The ten-feature student-performance schema; class target RaceEthnicity,
// regression target TotalScore.
Schema student_schema();

}  // namespace synthbench
