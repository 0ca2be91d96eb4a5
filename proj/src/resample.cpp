#include "synthbench/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthbench/errors.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

namespace {

// Seeded uniform subsample without replacement (partial Fisher-Yates),
// preserving draw order.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

Table take_rows(const Table& src, const std::vector<std::size_t>& rows) {
    Table out(src.schema());
    for (std::size_t r : rows) out.append_row_from(src, r);
    return out;
}

struct MixedDistance {
    std::vector<std::size_t> cont_cols, cat_cols;
    std::vector<double> mean, inv_sd;
    double mismatch_penalty_sq = 1.0;

    explicit MixedDistance(const Table& t) {
        std::vector<double> sds;
        for (std::size_t c = 0; c < t.n_cols(); ++c) {
            if (t.schema().columns[c].is_categorical()) {
                cat_cols.push_back(c);
                continue;
            }
            cont_cols.push_back(c);
            const auto& vals = t.cont(c);
            double m = 0.0;
            for (double v : vals) m += v;
            m /= static_cast<double>(vals.size());
            double var = 0.0;
            for (double v : vals) var += (v - m) * (v - m);
            var /= static_cast<double>(vals.size());
            const double sd = std::sqrt(var);
            mean.push_back(m);
            inv_sd.push_back(sd > 0.0 ? 1.0 / sd : 1.0);
            sds.push_back(sd > 0.0 ? sd : 1.0);
        }
        // Penalty per categorical mismatch: median of the continuous features'
        // standard deviations, measured in standardized units.
        if (!sds.empty()) {
            std::vector<double> std_units(sds.size());
            for (std::size_t i = 0; i < sds.size(); ++i) std_units[i] = sds[i] * inv_sd[i];  // == 1
            std::sort(std_units.begin(), std_units.end());
            const std::size_t mid = std_units.size() / 2;
            const double med = std_units.size() % 2 ? std_units[mid]
                                                    : 0.5 * (std_units[mid - 1] + std_units[mid]);
            mismatch_penalty_sq = med * med;
        }
    }

    double squared(const Table& t, std::size_t i, std::size_t j) const {
        double d2 = 0.0;
        for (std::size_t k = 0; k < cont_cols.size(); ++k) {
            const std::size_t c = cont_cols[k];
            const double d = (t.cont(c)[i] - t.cont(c)[j]) * inv_sd[k];
            d2 += d * d;
        }
        for (std::size_t c : cat_cols) {
            if (t.cat(c)[i] != t.cat(c)[j]) d2 += mismatch_penalty_sq;
        }
        return d2;
    }
};

std::vector<std::size_t> class_counts(const Table& t, std::size_t target_col,
                                      std::size_t n_levels) {
    std::vector<std::size_t> counts(n_levels, 0);
    for (auto v : t.cat(target_col)) ++counts[static_cast<std::size_t>(v)];
    return counts;
}

}  // namespace

Table smote(const Table& table, const std::string& target, const ResampleConfig& cfg) {
    if (table.n_rows() == 0) throw DomainError("smote: empty table");
    const std::size_t target_col = table.schema().index_of(target);
    if (!table.schema().columns[target_col].is_categorical()) {
        throw ConfigError("smote: target must be categorical: " + target);
    }
    const auto& levels = table.schema().columns[target_col].categorical().levels;
    const auto counts = class_counts(table, target_col, levels.size());
    const std::size_t majority = *std::max_element(counts.begin(), counts.end());
    // Schema levels with no rows are skipped; every observed class needs more
    // than k_neighbors members.
    for (std::size_t cls = 0; cls < counts.size(); ++cls) {
        if (counts[cls] > 0 && counts[cls] <= cfg.k_neighbors) {
            throw ConfigError("smote: class '" + levels[cls] + "' has " +
                              std::to_string(counts[cls]) + " rows, need more than k_neighbors=" +
                              std::to_string(cfg.k_neighbors));
        }
    }

    const MixedDistance dist(table);
    Rng rng(derive_seed(cfg.seed, "smote"));

    // Balanced pool: all originals plus interpolated minority rows.
    Table pool(table.schema());
    for (std::size_t r = 0; r < table.n_rows(); ++r) pool.append_row_from(table, r);

    std::vector<std::size_t> cont_cols, cat_cols;
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        (table.schema().columns[c].is_categorical() ? cat_cols : cont_cols).push_back(c);
    }

    // Per class: k nearest same-class neighbors (exact brute force), built
    // lazily for classes that synthesize.
    struct ClassPlan {
        std::vector<std::size_t> rows;
        std::vector<std::vector<std::size_t>> neighbors;  // indices into `rows`
        std::size_t needed = 0;
        std::size_t cursor = 0;  // round-robin over rows
    };
    std::vector<ClassPlan> plans(counts.size());
    auto ensure_neighbors = [&](ClassPlan& plan) {
        if (!plan.neighbors.empty()) return;
        plan.neighbors.resize(plan.rows.size());
        for (std::size_t a = 0; a < plan.rows.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> ds;
            ds.reserve(plan.rows.size() - 1);
            for (std::size_t b = 0; b < plan.rows.size(); ++b) {
                if (a == b) continue;
                ds.emplace_back(dist.squared(table, plan.rows[a], plan.rows[b]), b);
            }
            std::partial_sort(ds.begin(),
                              ds.begin() + static_cast<std::ptrdiff_t>(cfg.k_neighbors), ds.end());
            for (std::size_t k = 0; k < cfg.k_neighbors; ++k) {
                plan.neighbors[a].push_back(ds[k].second);
            }
        }
    };
    for (std::size_t cls = 0; cls < counts.size(); ++cls) {
        auto& plan = plans[cls];
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            if (table.cat(target_col)[r] == static_cast<std::int32_t>(cls)) plan.rows.push_back(r);
        }
        plan.needed = counts[cls] > 0 ? majority - counts[cls] : 0;
        if (plan.needed > 0) ensure_neighbors(plan);
    }

    auto synthesize_one = [&](ClassPlan& plan) {
        const std::size_t center_local = plan.cursor % plan.rows.size();
        ++plan.cursor;
        const std::size_t center = plan.rows[center_local];
        const auto& nbrs = plan.neighbors[center_local];
        const std::size_t pick = plan.rows[nbrs[rng.below(nbrs.size())]];
        const double lambda = rng.uniform01();

        const std::size_t out_row = pool.n_rows();
        pool.resize_rows(out_row + 1);
        for (std::size_t c : cont_cols) {
            const double rv = table.cont(c)[center];
            const double nv = table.cont(c)[pick];
            pool.cont(c)[out_row] = rv + lambda * (nv - rv);
        }
        for (std::size_t c : cat_cols) {
            // most frequent value among the k neighbors; ties -> lowest level
            std::vector<std::size_t> freq(table.schema().columns[c].categorical().levels.size(),
                                          0);
            for (std::size_t nb : nbrs) ++freq[static_cast<std::size_t>(table.cat(c)[plan.rows[nb]])];
            std::size_t best = 0;
            for (std::size_t l = 1; l < freq.size(); ++l) {
                if (freq[l] > freq[best]) best = l;
            }
            pool.cat(c)[out_row] = static_cast<std::int32_t>(best);
        }
    };

    // Balance pass: round-robin within each class.
    for (auto& plan : plans) {
        for (std::size_t s = 0; s < plan.needed; ++s) synthesize_one(plan);
    }

    if (cfg.target_rows == pool.n_rows()) return pool;
    if (cfg.target_rows < pool.n_rows()) {
        auto idx = subsample_indices(pool.n_rows(), cfg.target_rows, rng);
        return take_rows(pool, idx);
    }
    // Growing: continue generation, cycling classes so counts stay balanced.
    std::vector<std::size_t> synthesizable;
    for (std::size_t cls = 0; cls < plans.size(); ++cls) {
        if (plans[cls].rows.size() > cfg.k_neighbors) {
            ensure_neighbors(plans[cls]);
            synthesizable.push_back(cls);
        }
    }
    if (synthesizable.empty()) {
        throw ConfigError("smote: no class has more than k_neighbors rows");
    }
    std::size_t cls_cursor = 0;
    while (pool.n_rows() < cfg.target_rows) {
        synthesize_one(plans[synthesizable[cls_cursor % synthesizable.size()]]);
        ++cls_cursor;
    }
    return pool;
}

Table bootstrap_replicate(const Table& table, std::uint64_t seed) {
    if (table.n_rows() == 0) throw DomainError("bootstrap_replicate: empty table");
    Rng rng(seed);
    std::vector<std::size_t> rows(table.n_rows());
    for (auto& r : rows) r = rng.below(table.n_rows());
    return take_rows(table, rows);
}

Table bootstrap(const Table& table, const ResampleConfig& cfg) {
    if (table.n_rows() == 0) throw DomainError("bootstrap: empty table");
    const std::size_t n = table.n_rows();
    Rng rng(derive_seed(cfg.seed, "bootstrap"));

    // Pool of row indices from the replicates; rows are materialized only for
    // the final draw.
    std::vector<std::size_t> pool;
    pool.reserve(n * cfg.n_bootstrap_replicates);
    for (std::size_t rep = 0; rep < cfg.n_bootstrap_replicates; ++rep) {
        for (std::size_t i = 0; i < n; ++i) pool.push_back(rng.below(n));
    }
    std::vector<std::size_t> rows;
    rows.reserve(cfg.target_rows);
    for (std::size_t i = 0; i < cfg.target_rows; ++i) {
        rows.push_back(pool[rng.below(pool.size())]);
    }
    return take_rows(table, rows);
}

Table random_oversample(const Table& table, const std::string& target,
                        const ResampleConfig& cfg) {
    if (table.n_rows() == 0) throw DomainError("random_oversample: empty table");
    const std::size_t target_col = table.schema().index_of(target);
    if (!table.schema().columns[target_col].is_categorical()) {
        throw ConfigError("random_oversample: target must be categorical: " + target);
    }
    const auto& levels = table.schema().columns[target_col].categorical().levels;
    const auto counts = class_counts(table, target_col, levels.size());
    const std::size_t majority = *std::max_element(counts.begin(), counts.end());
    Rng rng(derive_seed(cfg.seed, "oversample"));

    std::vector<std::size_t> rows(table.n_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (std::size_t cls = 0; cls < counts.size(); ++cls) {
        if (counts[cls] == 0 || counts[cls] == majority) continue;
        std::vector<std::size_t> members;
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            if (table.cat(target_col)[r] == static_cast<std::int32_t>(cls)) members.push_back(r);
        }
        for (std::size_t s = counts[cls]; s < majority; ++s) {
            rows.push_back(members[rng.below(members.size())]);
        }
    }

    if (cfg.target_rows < rows.size()) {
        auto idx = subsample_indices(rows.size(), cfg.target_rows, rng);
        std::vector<std::size_t> picked;
        picked.reserve(idx.size());
        for (std::size_t i : idx) picked.push_back(rows[i]);
        rows = std::move(picked);
    } else {
        while (rows.size() < cfg.target_rows) {
            rows.push_back(rows[rng.below(rows.size())]);
        }
    }
    return take_rows(table, rows);
}

}  // namespace synthbench
