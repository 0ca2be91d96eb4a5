#include "synthbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synthbench/errors.hpp"

namespace synthbench {

namespace {

void require_nonempty(const std::vector<double>& a, const std::vector<double>& b,
                      const char* op) {
    if (a.empty() || b.empty()) throw DomainError(std::string(op) + ": empty sample");
}

void require_same_schema(const Table& real, const Table& synth, const char* op) {
    if (!(real.schema() == synth.schema())) {
        throw DomainError(std::string(op) + ": schema mismatch");
    }
}

}  // namespace

KsResult ks_test(const std::vector<double>& real_col, const std::vector<double>& synth_col) {
    require_nonempty(real_col, synth_col, "ks_test");
    std::vector<double> a = real_col;
    std::vector<double> b = synth_col;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());

    // Walk the pooled sample; advancing through all ties of a value before
    // recording evaluates both one-sided gaps at every jump point.
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
            v = a[i];
        } else {
            v = b[j];
        }
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        const double gap = std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m);
        d = std::max(d, gap);
    }

    KsResult res;
    res.statistic = d;
    if (d <= 0.0) {
        res.p_value = 1.0;  // the alternating series does not converge at lambda = 0
        return res;
    }

    // Small tie-free samples get the exact permutation distribution via
    // lattice-path counting (the asymptotic series is off by up to ~0.1 at
    // these sizes): p = 1 - #paths{ max |i/n - j/m| < D } / C(n+m, n).
    bool tie_free = true;
    {
        std::vector<double> pooled = a;
        pooled.insert(pooled.end(), b.begin(), b.end());
        std::sort(pooled.begin(), pooled.end());
        for (std::size_t k = 0; k + 1 < pooled.size(); ++k) {
            if (pooled[k] == pooled[k + 1]) {
                tie_free = false;
                break;
            }
        }
    }
    if (tie_free && a.size() + b.size() <= 32) {
        const std::size_t ni = a.size(), mi = b.size();
        std::vector<std::vector<double>> paths(ni + 1, std::vector<double>(mi + 1, 0.0));
        paths[0][0] = 1.0;
        for (std::size_t i = 0; i <= ni; ++i) {
            for (std::size_t j = 0; j <= mi; ++j) {
                if (i == 0 && j == 0) continue;
                const double gap = std::abs(static_cast<double>(i) / n -
                                            static_cast<double>(j) / m);
                if (gap >= d - 1e-12) {
                    paths[i][j] = 0.0;
                    continue;
                }
                paths[i][j] = (i > 0 ? paths[i - 1][j] : 0.0) + (j > 0 ? paths[i][j - 1] : 0.0);
            }
        }
        double total = 1.0;  // C(n+m, n), exact in doubles for n+m <= 32
        for (std::size_t k = 1; k <= ni; ++k) {
            total *= static_cast<double>(mi + k) / static_cast<double>(k);
        }
        res.p_value = std::clamp(1.0 - paths[ni][mi] / std::round(total), 0.0, 1.0);
        return res;
    }

    const double lambda = d * std::sqrt(n * m / (n + m));
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1;; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) *
                                     lambda * lambda);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    res.p_value = std::clamp(2.0 * p, 0.0, 1.0);
    return res;
}

double js_divergence_masses(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size() || p.empty()) {
        throw DomainError("js_divergence: mass vectors must have equal non-zero length");
    }
    double jsd = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log2(p[i] / m);
        if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log2(q[i] / m);
    }
    return std::clamp(jsd, 0.0, 1.0);
}

double js_divergence(const std::vector<double>& real_col, const std::vector<double>& synth_col,
                     std::size_t bins) {
    require_nonempty(real_col, synth_col, "js_divergence");
    if (bins < 2) throw DomainError("js_divergence: need at least 2 bins");
    double lo = real_col[0], hi = real_col[0];
    for (double v : real_col) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : synth_col) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) return 0.0;  // both samples are a single shared point mass

    const double width = (hi - lo) / static_cast<double>(bins);
    auto histogram = [&](const std::vector<double>& col) {
        std::vector<double> h(bins, 0.0);
        for (double v : col) {
            auto b = static_cast<std::size_t>((v - lo) / width);
            if (b >= bins) b = bins - 1;  // v == hi
            h[b] += 1.0;
        }
        for (double& v : h) v /= static_cast<double>(col.size());
        return h;
    };
    return js_divergence_masses(histogram(real_col), histogram(synth_col));
}

double wasserstein1(const std::vector<double>& real_col, const std::vector<double>& synth_col) {
    require_nonempty(real_col, synth_col, "wasserstein1");
    std::vector<double> a = real_col;
    std::vector<double> b = synth_col;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());

    // integral of |F_n - G_m| between consecutive pooled points
    double dist = 0.0;
    std::size_t i = 0, j = 0;
    double prev = std::min(a[0], b[0]);
    while (i < a.size() || j < b.size()) {
        double v;
        if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
            v = a[i];
        } else {
            v = b[j];
        }
        const double fa = static_cast<double>(i) / n;
        const double fb = static_cast<double>(j) / m;
        dist += std::abs(fa - fb) * (v - prev);
        prev = v;
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
    }
    return dist;
}

double categorical_fidelity(const Table& real, const Table& synth) {
    require_same_schema(real, synth, "categorical_fidelity");
    if (real.n_rows() == 0 || synth.n_rows() == 0) {
        throw DomainError("categorical_fidelity: empty table");
    }
    double sum = 0.0;
    std::size_t n_cat = 0;
    for (std::size_t c = 0; c < real.n_cols(); ++c) {
        if (!real.schema().columns[c].is_categorical()) continue;
        const auto levels = real.schema().columns[c].categorical().levels.size();
        std::vector<double> p(levels, 0.0), q(levels, 0.0);
        for (auto v : real.cat(c)) p[static_cast<std::size_t>(v)] += 1.0;
        for (auto v : synth.cat(c)) q[static_cast<std::size_t>(v)] += 1.0;
        double tv = 0.0;
        for (std::size_t l = 0; l < levels; ++l) {
            tv += std::abs(p[l] / static_cast<double>(real.n_rows()) -
                           q[l] / static_cast<double>(synth.n_rows()));
        }
        sum += 1.0 - 0.5 * tv;
        ++n_cat;
    }
    return n_cat == 0 ? 1.0 : sum / static_cast<double>(n_cat);
}

namespace {

// DCR feature space: continuous scaled to [0,1] by real min/max; a
// categorical mismatch contributes exactly 1 to the squared distance (the
// one-hot-over-sqrt(2) formulation computed directly on level indices).
struct DcrSpace {
    std::vector<std::size_t> cont_cols;
    std::vector<std::size_t> cat_cols;
    std::vector<double> lo, inv_span;

    explicit DcrSpace(const Table& real) {
        for (std::size_t c = 0; c < real.n_cols(); ++c) {
            if (real.schema().columns[c].is_categorical()) {
                cat_cols.push_back(c);
            } else {
                cont_cols.push_back(c);
                double mn = std::numeric_limits<double>::infinity();
                double mx = -std::numeric_limits<double>::infinity();
                for (double v : real.cont(c)) {
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                lo.push_back(mn);
                inv_span.push_back(mx > mn ? 1.0 / (mx - mn) : 0.0);
            }
        }
    }

    double squared_distance(const Table& a, std::size_t i, const Table& b, std::size_t j) const {
        double d2 = 0.0;
        for (std::size_t k = 0; k < cont_cols.size(); ++k) {
            const std::size_t c = cont_cols[k];
            const double d = (a.cont(c)[i] - b.cont(c)[j]) * inv_span[k];
            d2 += d * d;
        }
        for (std::size_t c : cat_cols) {
            if (a.cat(c)[i] != b.cat(c)[j]) d2 += 1.0;
        }
        return d2;
    }
};

}  // namespace

double dcr_score(const Table& real, const Table& synth) {
    require_same_schema(real, synth, "dcr_score");
    if (real.n_rows() < 2 || synth.n_rows() == 0) {
        throw DomainError("dcr_score: need >= 2 real rows and >= 1 synthetic row");
    }
    const DcrSpace space(real);

    double sum_nn = 0.0;
    for (std::size_t s = 0; s < synth.n_rows(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < real.n_rows(); ++r) {
            const double d2 = space.squared_distance(synth, s, real, r);
            if (d2 < best) best = d2;
            if (best == 0.0) break;
        }
        sum_nn += std::sqrt(best);
    }
    const double mean_nn = sum_nn / static_cast<double>(synth.n_rows());

    double sum_ref = 0.0;
    for (std::size_t r = 0; r < real.n_rows(); ++r) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t o = 0; o < real.n_rows(); ++o) {
            if (o == r) continue;
            const double d2 = space.squared_distance(real, r, real, o);
            if (d2 < best) best = d2;
            if (best == 0.0) break;
        }
        sum_ref += std::sqrt(best);
    }
    const double d_ref = sum_ref / static_cast<double>(real.n_rows());

    if (d_ref == 0.0) return mean_nn == 0.0 ? 0.0 : 1.0;
    return std::min(1.0, mean_nn / d_ref);
}

FidelityReport compute_fidelity(const Table& real, const Table& synth, std::size_t bins) {
    require_same_schema(real, synth, "compute_fidelity");
    FidelityReport rep;
    double sum_ks = 0.0, sum_w = 0.0, sum_jsd = 0.0;
    std::size_t n_cont = 0;
    for (std::size_t c = 0; c < real.n_cols(); ++c) {
        ColumnMetrics cm;
        cm.name = real.schema().columns[c].name;
        cm.continuous = !real.schema().columns[c].is_categorical();
        if (cm.continuous) {
            const auto ks = ks_test(real.cont(c), synth.cont(c));
            cm.ks = ks.statistic;
            cm.ks_pvalue = ks.p_value;
            cm.wasserstein = wasserstein1(real.cont(c), synth.cont(c));
            cm.jsd = js_divergence(real.cont(c), synth.cont(c), bins);
            sum_ks += cm.ks;
            sum_w += cm.wasserstein;
            ++n_cont;
        } else {
            const auto levels = real.schema().columns[c].categorical().levels.size();
            std::vector<double> p(levels, 0.0), q(levels, 0.0);
            for (auto v : real.cat(c)) p[static_cast<std::size_t>(v)] += 1.0 / real.n_rows();
            for (auto v : synth.cat(c)) q[static_cast<std::size_t>(v)] += 1.0 / synth.n_rows();
            cm.jsd = js_divergence_masses(p, q);
        }
        sum_jsd += cm.jsd;
        rep.columns.push_back(std::move(cm));
    }
    rep.mean_ks = n_cont ? sum_ks / static_cast<double>(n_cont) : 0.0;
    rep.mean_wasserstein = n_cont ? sum_w / static_cast<double>(n_cont) : 0.0;
    rep.mean_jsd = real.n_cols() ? sum_jsd / static_cast<double>(real.n_cols()) : 0.0;
    rep.categorical_fidelity = categorical_fidelity(real, synth);
    rep.dcr = dcr_score(real, synth);
    return rep;
}

}  // namespace synthbench
