#pragma once

#include <cstddef>
#include <string>

#include "synthbench/schema.hpp"

namespace synthbench {

struct LoadReport {
    std::size_t rows_loaded = 0;
    std::size_t dropped_missing = 0;     // empty or unparseable cells
    std::size_t dropped_invalid = 0;     // out-of-domain levels or values
    std::size_t dropped_duplicates = 0;  // exact duplicates of an earlier row
};

struct LoadResult {
    Table table;
    LoadReport report;
};

// RFC 4180 CSV: comma separated, UTF-8, double-quote quoting, header required.
// The header must match the schema column names in order.
LoadResult load_csv(const std::string& path, const Schema& schema);

// Parse from an in-memory CSV string (same semantics as load_csv).
LoadResult parse_csv(const std::string& text, const Schema& schema);

void write_csv(const Table& table, const std::string& path);
std::string to_csv(const Table& table);

}  // namespace synthbench
