#pragma once

#include <cstdint>
#include <string>

#include "synthbench/schema.hpp"

namespace synthbench {

struct ResampleConfig {
    std::size_t k_neighbors = 5;
    std::size_t n_bootstrap_replicates = 100;
    std::size_t target_rows = 10000;
    std::uint64_t seed = 42;
};

// Nominal-continuous SMOTE: balances every class of `target` up to the
// majority count by interpolating between a minority row and one of its k
// nearest same-class neighbors (lambda ~ U[0,1]); categorical features take
// the most frequent value among the k neighbors. Neighbor distance is
// Euclidean over standardized continuous features plus a penalty of
// median(continuous stddevs) per categorical mismatch. The balanced table
// (originals included) is then resized to cfg.target_rows: seeded uniform
// subsample when shrinking, continued generation when growing.
// Throws ConfigError naming the class when a class has <= k_neighbors rows.
Table smote(const Table& table, const std::string& target, const ResampleConfig& cfg);

// One with-replacement resample of size |table| (helper used by bootstrap;
// exposed for its own distributional tests).
Table bootstrap_replicate(const Table& table, std::uint64_t seed);

// Draws cfg.n_bootstrap_replicates with-replacement resamples of the original
// size, pools them, and returns a uniform with-replacement draw of
// cfg.target_rows rows from the pool. Every output row is a copy of an input row.
Table bootstrap(const Table& table, const ResampleConfig& cfg);

// Balances all classes to the majority count by duplicating existing rows,
// then resizes to cfg.target_rows (subsample when shrinking, further
// with-replacement duplication when growing).
Table random_oversample(const Table& table, const std::string& target,
                        const ResampleConfig& cfg);

}  // namespace synthbench
