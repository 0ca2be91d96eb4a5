#include "synthbench/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthbench/errors.hpp"
#include "synthbench/forest.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

namespace {

void require_equal_lengths(const std::vector<double>& y, const std::vector<double>& yhat,
                           const char* op) {
    if (y.size() != yhat.size() || y.empty()) {
        throw DomainError(std::string(op) + ": vectors must have equal non-zero length");
    }
}

}  // namespace

double mse(const std::vector<double>& y, const std::vector<double>& yhat) {
    require_equal_lengths(y, yhat, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - yhat[i];
        sum += d * d;
    }
    return sum / static_cast<double>(y.size());
}

double mae(const std::vector<double>& y, const std::vector<double>& yhat) {
    require_equal_lengths(y, yhat, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += std::abs(y[i] - yhat[i]);
    return sum / static_cast<double>(y.size());
}

double r2(const std::vector<double>& y, const std::vector<double>& yhat) {
    require_equal_lengths(y, yhat, "r2");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double rss = 0.0, tss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        rss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        tss += (y[i] - mean) * (y[i] - mean);
    }
    if (tss == 0.0) return rss == 0.0 ? 1.0 : kR2Undefined;
    return 1.0 - rss / tss;
}

std::pair<Table, Table> split_holdout(const Table& real, double test_fraction,
                                      std::uint64_t seed) {
    if (real.n_rows() < 10) throw DomainError("split_holdout: need at least 10 rows");
    const std::size_t target_col = real.schema().index_of(real.schema().class_target);
    const auto& labels = real.cat(target_col);
    const auto n_levels = real.schema().columns[target_col].categorical().levels.size();

    std::vector<std::vector<std::size_t>> by_class(n_levels);
    for (std::size_t r = 0; r < real.n_rows(); ++r) {
        by_class[static_cast<std::size_t>(labels[r])].push_back(r);
    }

    // Largest-remainder apportionment of the exact test total across classes.
    const auto test_total =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(real.n_rows())));
    std::vector<std::size_t> quota(n_levels, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < n_levels; ++c) {
        if (by_class[c].empty()) continue;
        const double exact = test_fraction * static_cast<double>(by_class[c].size());
        quota[c] = static_cast<std::size_t>(exact);
        assigned += quota[c];
        remainders.emplace_back(-(exact - static_cast<double>(quota[c])), c);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t i = 0; i < remainders.size() && assigned < test_total; ++i) {
        ++quota[remainders[i].second];
        ++assigned;
    }
    for (std::size_t c = 0; c < n_levels; ++c) {
        if (by_class[c].empty()) continue;
        if (quota[c] == 0 || quota[c] >= by_class[c].size()) {
            throw DomainError("split_holdout: class '" +
                              real.schema().columns[target_col].categorical().levels[c] +
                              "' has too few rows for a stratified split");
        }
    }

    Rng rng(derive_seed(seed, "holdout"));
    std::vector<bool> in_test(real.n_rows(), false);
    for (std::size_t c = 0; c < n_levels; ++c) {
        auto& rows = by_class[c];
        if (rows.empty()) continue;
        for (std::size_t i = 0; i < quota[c]; ++i) {
            const std::size_t j = i + rng.below(rows.size() - i);
            std::swap(rows[i], rows[j]);
            in_test[rows[i]] = true;
        }
    }

    Table train(real.schema());
    Table test(real.schema());
    for (std::size_t r = 0; r < real.n_rows(); ++r) {
        (in_test[r] ? test : train).append_row_from(real, r);
    }
    return {std::move(train), std::move(test)};
}

namespace {

struct EvalSplit {
    Table train;
    Table test;
    std::vector<double> test_reg_truth;
    std::vector<std::int32_t> test_class_truth;
};

double accuracy(const std::vector<std::int32_t>& truth, const std::vector<std::int32_t>& pred) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == pred[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

TSTRResult tstr(const Table& synth, const Table& real, const std::string& class_target,
                const std::string& regression_target, std::uint64_t seed) {
    if (!(synth.schema() == real.schema())) throw DomainError("tstr: schema mismatch");

    auto [train_real, test] = split_holdout(real, 0.30, derive_seed(seed, "tstr-holdout"));
    const std::size_t class_col = real.schema().index_of(class_target);
    const std::size_t reg_col = real.schema().index_of(regression_target);
    const auto& truth_class = test.cat(class_col);
    const auto& truth_reg = test.cont(reg_col);
    const std::vector<double> truth_reg_v(truth_reg.begin(), truth_reg.end());

    ForestConfig cls_cfg;
    cls_cfg.n_trees = 200;
    cls_cfg.seed = derive_seed(seed, "tstr-rf-classify");
    ForestConfig reg_cfg;
    reg_cfg.n_trees = 300;
    reg_cfg.seed = derive_seed(seed, "tstr-rf-regress");

    auto evaluate = [&](const Table& train) {
        const auto cls = RandomForest::fit_classify(train, class_target, cls_cfg);
        const auto reg = RandomForest::fit_regress(train, regression_target, reg_cfg);
        const double acc = accuracy(truth_class, cls.predict_class(test));
        const auto pred = reg.predict_value(test);
        const double r = r2(truth_reg_v, pred);
        const double m = mae(truth_reg_v, pred);
        return std::tuple<double, double, double>{acc, r, m};
    };

    TSTRResult out;
    {
        const auto [acc, r, m] = evaluate(synth);
        out.classification_accuracy = acc;
        out.regression_r2 = r;
        out.regression_mae = m;
        out.ml_utility = 0.5 * (acc + std::max(0.0, r));
    }
    {
        const auto [acc, r, m] = evaluate(train_real);
        out.baseline_accuracy = acc;
        out.baseline_r2 = r;
        out.baseline_mae = m;
        out.baseline_utility = 0.5 * (acc + std::max(0.0, r));
    }
    return out;
}

}  // namespace synthbench
