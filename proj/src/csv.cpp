#include "synthbench/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "synthbench/errors.hpp"

namespace synthbench {

namespace {

// RFC 4180 record reader; handles quoted fields with embedded commas,
// escaped quotes and newlines, and both LF and CRLF terminators.
class CsvReader {
public:
    explicit CsvReader(const std::string& text) : text_(text) {}

    bool next_record(std::vector<std::string>& fields) {
        fields.clear();
        if (pos_ >= text_.size()) return false;
        std::string field;
        bool in_quotes = false;
        while (pos_ <= text_.size()) {
            if (pos_ == text_.size()) {
                fields.push_back(std::move(field));
                ++pos_;
                return true;
            }
            const char c = text_[pos_];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        field.push_back('"');
                        ++pos_;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    field.push_back(c);
                }
                ++pos_;
            } else if (c == '"' && field.empty()) {
                in_quotes = true;
                ++pos_;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                ++pos_;
            } else if (c == '\n' || c == '\r') {
                fields.push_back(std::move(field));
                if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
                ++pos_;
                return true;
            } else {
                field.push_back(c);
                ++pos_;
            }
        }
        return true;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::string& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out += s;
        return;
    }
    out.push_back('"');
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

std::string format_double(double v) {
    // Shortest round-trip representation; locale independent.
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_cell(double v, bool integer_valued) {
    if (integer_valued && std::abs(v - std::round(v)) < 1e-9) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), static_cast<long long>(std::llround(v)));
        return std::string(buf, ptr);
    }
    return format_double(v);
}

// Row fingerprint for duplicate detection: buckets by hash, exact compare on
// collision.
struct RowIndex {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

    static std::uint64_t hash_row(const Table& t, std::size_t row) {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xff;
                h *= 1099511628211ull;
            }
        };
        for (std::size_t c = 0; c < t.n_cols(); ++c) {
            if (t.schema().columns[c].is_categorical()) {
                mix(static_cast<std::uint64_t>(t.cat(c)[row]));
            } else {
                double d = t.cont(c)[row];
                std::uint64_t bits;
                static_assert(sizeof(bits) == sizeof(d));
                std::memcpy(&bits, &d, sizeof(bits));
                mix(bits);
            }
        }
        return h;
    }

    // True when `candidate` row `row` already exists in `existing`.
    bool is_duplicate(const Table& candidate, std::size_t row, const Table& existing) const {
        const std::uint64_t h = hash_row(candidate, row);
        auto it = buckets.find(h);
        if (it == buckets.end()) return false;
        for (std::size_t other : it->second) {
            if (candidate.rows_equal(row, existing, other)) return true;
        }
        return false;
    }

    void insert(const Table& t, std::size_t row) { buckets[hash_row(t, row)].push_back(row); }
};

}  // namespace

LoadResult parse_csv(const std::string& text, const Schema& schema) {
    schema.validate();
    CsvReader reader(text);
    std::vector<std::string> fields;
    if (!reader.next_record(fields)) {
        throw SchemaError("CSV is empty; header row required");
    }
    if (fields.size() != schema.columns.size()) {
        throw SchemaError("CSV header has " + std::to_string(fields.size()) + " columns, schema has " +
                          std::to_string(schema.columns.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] != schema.columns[c].name) {
            throw SchemaError("CSV header mismatch at column " + std::to_string(c) + ": expected '" +
                              schema.columns[c].name + "', got '" + fields[c] + "'");
        }
    }

    // Level lookup per categorical column.
    std::vector<std::unordered_map<std::string, std::int32_t>> level_of(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].is_categorical()) {
            const auto& levels = schema.columns[c].categorical().levels;
            for (std::size_t l = 0; l < levels.size(); ++l) {
                level_of[c][levels[l]] = static_cast<std::int32_t>(l);
            }
        }
    }

    LoadResult result{Table(schema), {}};
    Table& table = result.table;
    RowIndex seen;
    Table row_buf(schema);

    while (reader.next_record(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
        if (fields.size() != schema.columns.size()) {
            ++result.report.dropped_missing;
            continue;
        }
        bool missing = false;
        bool invalid = false;
        row_buf = Table(schema);
        row_buf.resize_rows(1);
        for (std::size_t c = 0; c < schema.columns.size() && !missing && !invalid; ++c) {
            const std::string& cell = fields[c];
            if (cell.empty()) {
                missing = true;
                break;
            }
            if (schema.columns[c].is_categorical()) {
                auto it = level_of[c].find(cell);
                if (it == level_of[c].end()) {
                    invalid = true;
                } else {
                    row_buf.cat(c)[0] = it->second;
                }
            } else {
                const auto v = parse_number(cell);
                if (!v) {
                    missing = true;
                    break;
                }
                const auto& k = schema.columns[c].continuous();
                if (*v < k.min || *v > k.max ||
                    (k.integer_valued && std::abs(*v - std::round(*v)) > 1e-9)) {
                    invalid = true;
                } else {
                    row_buf.cont(c)[0] = *v;
                }
            }
        }
        if (missing) {
            ++result.report.dropped_missing;
            continue;
        }
        if (invalid) {
            ++result.report.dropped_invalid;
            continue;
        }
        if (seen.is_duplicate(row_buf, 0, table)) {
            ++result.report.dropped_duplicates;
            continue;
        }
        table.append_row_from(row_buf, 0);
        seen.insert(table, table.n_rows() - 1);
    }
    result.report.rows_loaded = table.n_rows();
    return result;
}

LoadResult load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open CSV file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading CSV file: " + path);
    return parse_csv(buf.str(), schema);
}

std::string to_csv(const Table& table) {
    std::string out;
    const auto& schema = table.schema();
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (c) out.push_back(',');
        write_field(out, schema.columns[c].name);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            if (c) out.push_back(',');
            if (schema.columns[c].is_categorical()) {
                write_field(out, schema.columns[c].categorical().levels[table.cat(c)[r]]);
            } else {
                out += format_cell(table.cont(c)[r], schema.columns[c].continuous().integer_valued);
            }
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << to_csv(table);
    if (!out) throw IoError("error writing CSV file: " + path);
}

}  // namespace synthbench
