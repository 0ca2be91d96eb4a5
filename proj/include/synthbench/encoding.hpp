#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "synthbench/matrix.hpp"
#include "synthbench/schema.hpp"

namespace synthbench {

// One encoded column per one-hot level.
struct OneHotEnc {
    std::size_t offset = 0;
    std::size_t levels = 0;
};

// Categorical column with levels {"0","1"}: one encoded 0/1 column.
struct BinaryEnc {
    std::size_t offset = 0;
    std::int32_t one_level = 0;  // level index whose literal is "1"
};

// Continuous column standardized to (x - mean) / stddev (population stddev;
// constant columns use stddev = 1).
struct StandardizedEnc {
    std::size_t offset = 0;
    double mean = 0.0;
    double stddev = 1.0;
};

using ColumnEnc = std::variant<OneHotEnc, BinaryEnc, StandardizedEnc>;

struct EncodedMatrix {
    Matrix data;
    std::vector<ColumnEnc> encodings;  // parallel to schema columns
    Schema schema;

    std::size_t width() const { return data.cols; }
};

std::size_t encoded_width(const Schema& schema);

// One-hot + standardization using the table's own statistics. Throws
// DomainError on an empty table.
EncodedMatrix fit_encoding(const Table& table);

// Encode arbitrary rows with an existing encoding map.
Matrix encode_with(const Table& table, const std::vector<ColumnEnc>& encodings,
                   const Schema& schema);

// Inverse of the encoding: argmax over one-hot groups (ties -> lowest index),
// threshold 0.5 for binary columns, de-standardization for continuous. When
// clamp, continuous cells are clipped to the schema [min,max]; when
// round_integers, integer-valued cells are rounded half away from zero.
Table decode_matrix(const Matrix& data, const std::vector<ColumnEnc>& encodings,
                    const Schema& schema, bool clamp, bool round_integers);

Table decode(const EncodedMatrix& m, bool clamp, bool round_integers);

}  // namespace synthbench
