#pragma once

#include <string>
#include <vector>

#include "synthbench/schema.hpp"

namespace synthbench {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Exact supremum of |F_n - G_m| over the pooled sample. The p-value is the
// asymptotic Kolmogorov series p = 2 * sum_k (-1)^(k-1) exp(-2 k^2 lambda^2),
// lambda = D * sqrt(nm/(n+m)), clamped to [0,1]; tie-free samples with
// n+m <= 32 get the exact permutation distribution (lattice-path count)
// instead, where the series is off by up to ~0.1. Throws DomainError on empty
// samples.
KsResult ks_test(const std::vector<double>& real_col, const std::vector<double>& synth_col);

// Base-2 Jensen-Shannon divergence between two probability mass vectors.
double js_divergence_masses(const std::vector<double>& p, const std::vector<double>& q);

// Continuous samples binned into `bins` shared equal-width bins over the
// union range. Result in [0,1].
double js_divergence(const std::vector<double>& real_col, const std::vector<double>& synth_col,
                     std::size_t bins = 20);

// 1-D Wasserstein-1: integral of |F_n - G_m| over the merged sample, in the
// column's original units.
double wasserstein1(const std::vector<double>& real_col, const std::vector<double>& synth_col);

// Mean over categorical columns of 1 - total variation distance between the
// level frequency vectors. Throws DomainError on schema mismatch.
double categorical_fidelity(const Table& real, const Table& synth);

// Privacy distance: features scaled to [0,1] by real-data min/max, one
// categorical mismatch costs distance 1; per synthetic row the Euclidean
// distance to the nearest real row; the mean is divided by D_ref, the mean
// nearest-other-neighbor distance within the real data, and capped at 1.
double dcr_score(const Table& real, const Table& synth);

struct ColumnMetrics {
    std::string name;
    bool continuous = false;
    double ks = 0.0;          // continuous columns only
    double ks_pvalue = 1.0;   // continuous columns only
    double wasserstein = 0.0; // continuous columns only
    double jsd = 0.0;         // all columns
};

struct FidelityReport {
    std::vector<ColumnMetrics> columns;
    double mean_ks = 0.0;           // over continuous columns
    double mean_wasserstein = 0.0;  // over continuous columns, original units
    double mean_jsd = 0.0;          // over all columns
    double categorical_fidelity = 1.0;
    double dcr = 0.0;
};

FidelityReport compute_fidelity(const Table& real, const Table& synth, std::size_t bins = 20);

}  // namespace synthbench
