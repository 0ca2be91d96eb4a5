#include "synthbench/encoding.hpp"

#include <algorithm>
#include <cmath>

#include "synthbench/errors.hpp"

namespace synthbench {

namespace {

// Categorical columns with the literal level set {"0","1"} stay a single 0/1
// column instead of a 2-wide one-hot.
bool is_binary01(const Column& col) {
    if (!col.is_categorical()) return false;
    const auto& levels = col.categorical().levels;
    if (levels.size() != 2) return false;
    return (levels[0] == "0" && levels[1] == "1") || (levels[0] == "1" && levels[1] == "0");
}

std::int32_t one_level_index(const Column& col) {
    return col.categorical().levels[0] == "1" ? 0 : 1;
}

std::vector<ColumnEnc> layout(const Schema& schema) {
    std::vector<ColumnEnc> encs;
    std::size_t offset = 0;
    for (const auto& col : schema.columns) {
        if (is_binary01(col)) {
            encs.push_back(BinaryEnc{offset, one_level_index(col)});
            offset += 1;
        } else if (col.is_categorical()) {
            const std::size_t n = col.categorical().levels.size();
            encs.push_back(OneHotEnc{offset, n});
            offset += n;
        } else {
            encs.push_back(StandardizedEnc{offset, 0.0, 1.0});
            offset += 1;
        }
    }
    return encs;
}

std::size_t total_width(const std::vector<ColumnEnc>& encs) {
    std::size_t width = 0;
    for (const auto& e : encs) {
        if (std::holds_alternative<OneHotEnc>(e)) {
            const auto& o = std::get<OneHotEnc>(e);
            width = std::max(width, o.offset + o.levels);
        } else if (std::holds_alternative<BinaryEnc>(e)) {
            width = std::max(width, std::get<BinaryEnc>(e).offset + 1);
        } else {
            width = std::max(width, std::get<StandardizedEnc>(e).offset + 1);
        }
    }
    return width;
}

}  // namespace

std::size_t encoded_width(const Schema& schema) { return total_width(layout(schema)); }

Matrix encode_with(const Table& table, const std::vector<ColumnEnc>& encodings,
                   const Schema& schema) {
    const std::size_t n = table.n_rows();
    Matrix m(n, total_width(encodings));
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& e = encodings[c];
        if (std::holds_alternative<OneHotEnc>(e)) {
            const auto& o = std::get<OneHotEnc>(e);
            const auto& vals = table.cat(c);
            for (std::size_t r = 0; r < n; ++r) {
                m.at(r, o.offset + static_cast<std::size_t>(vals[r])) = 1.0;
            }
        } else if (std::holds_alternative<BinaryEnc>(e)) {
            const auto& b = std::get<BinaryEnc>(e);
            const auto& vals = table.cat(c);
            for (std::size_t r = 0; r < n; ++r) {
                m.at(r, b.offset) = vals[r] == b.one_level ? 1.0 : 0.0;
            }
        } else {
            const auto& s = std::get<StandardizedEnc>(e);
            const auto& vals = table.cont(c);
            for (std::size_t r = 0; r < n; ++r) {
                m.at(r, s.offset) = (vals[r] - s.mean) / s.stddev;
            }
        }
    }
    return m;
}

EncodedMatrix fit_encoding(const Table& table) {
    if (table.n_rows() == 0) throw DomainError("fit_encoding: empty table");
    const Schema& schema = table.schema();
    auto encs = layout(schema);
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (auto* s = std::get_if<StandardizedEnc>(&encs[c])) {
            const auto& vals = table.cont(c);
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= static_cast<double>(vals.size());
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= static_cast<double>(vals.size());  // population variance
            const double sd = std::sqrt(var);
            s->mean = mean;
            s->stddev = sd > 0.0 ? sd : 1.0;
        }
    }
    EncodedMatrix out;
    out.encodings = encs;
    out.schema = schema;
    out.data = encode_with(table, encs, schema);
    return out;
}

Table decode_matrix(const Matrix& data, const std::vector<ColumnEnc>& encodings,
                    const Schema& schema, bool clamp, bool round_integers) {
    if (data.cols != total_width(encodings)) {
        throw DomainError("decode: matrix width does not match encoding map");
    }
    Table out(schema);
    out.resize_rows(data.rows);
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& e = encodings[c];
        if (std::holds_alternative<OneHotEnc>(e)) {
            const auto& o = std::get<OneHotEnc>(e);
            auto& vals = out.cat(c);
            for (std::size_t r = 0; r < data.rows; ++r) {
                std::size_t best = 0;
                double best_v = data.at(r, o.offset);
                for (std::size_t l = 1; l < o.levels; ++l) {
                    const double v = data.at(r, o.offset + l);
                    if (v > best_v) {  // ties keep the lowest index
                        best_v = v;
                        best = l;
                    }
                }
                vals[r] = static_cast<std::int32_t>(best);
            }
        } else if (std::holds_alternative<BinaryEnc>(e)) {
            const auto& b = std::get<BinaryEnc>(e);
            auto& vals = out.cat(c);
            for (std::size_t r = 0; r < data.rows; ++r) {
                const bool one = data.at(r, b.offset) >= 0.5;
                vals[r] = one ? b.one_level : (1 - b.one_level);
            }
        } else {
            const auto& s = std::get<StandardizedEnc>(e);
            const auto& k = schema.columns[c].continuous();
            auto& vals = out.cont(c);
            for (std::size_t r = 0; r < data.rows; ++r) {
                double v = data.at(r, s.offset) * s.stddev + s.mean;
                if (round_integers && k.integer_valued) v = std::round(v);
                if (clamp) {
                    if (v < k.min) v = k.min;
                    if (v > k.max) v = k.max;
                }
                vals[r] = v;
            }
        }
    }
    return out;
}

Table decode(const EncodedMatrix& m, bool clamp, bool round_integers) {
    return decode_matrix(m.data, m.encodings, m.schema, clamp, round_integers);
}

}  // namespace synthbench
