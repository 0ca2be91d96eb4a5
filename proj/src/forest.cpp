#include "synthbench/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthbench/errors.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

namespace {

struct BuildContext {
    const Table* data = nullptr;
    std::vector<std::size_t> features;
    std::size_t target = 0;
    bool classify = true;
    std::size_t n_classes = 0;
    std::size_t mtry = 1;
    int max_depth = 16;
    std::size_t min_leaf = 2;
    Rng* rng = nullptr;
};

double gini(const std::vector<double>& counts, double total) {
    double g = 1.0;
    for (double c : counts) {
        const double p = c / total;
        g -= p * p;
    }
    return g;
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    bool is_categorical = false;
    double threshold = 0.0;
    std::int32_t level = 0;
    double score = 0.0;  // weighted child impurity, lower is better
};

// Seeded permutation of the feature set; the split search scans the first
// mtry entries and keeps going only while no valid split has been found yet
// (so nodes whose sampled features are all unsplittable still split when any
// feature can).
std::vector<std::size_t> sample_features(const BuildContext& ctx) {
    std::vector<std::size_t> pool = ctx.features;
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
        const std::size_t j = i + ctx.rng->below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    return pool;
}

SplitChoice best_split_classify(const BuildContext& ctx, const std::vector<std::size_t>& rows,
                                const std::vector<std::size_t>& feats) {
    const Table& t = *ctx.data;
    const auto& labels = t.cat(ctx.target);
    const double n = static_cast<double>(rows.size());

    SplitChoice best;
    std::size_t examined = 0;
    for (std::size_t f : feats) {
        if (examined >= ctx.mtry && best.found) break;
        ++examined;
        if (t.schema().columns[f].is_categorical()) {
            const auto n_levels = t.schema().columns[f].categorical().levels.size();
            // one-vs-rest on each level present in the node
            std::vector<std::vector<double>> level_class(n_levels,
                                                         std::vector<double>(ctx.n_classes, 0.0));
            std::vector<double> level_count(n_levels, 0.0);
            std::vector<double> total_class(ctx.n_classes, 0.0);
            for (std::size_t r : rows) {
                const auto lv = static_cast<std::size_t>(t.cat(f)[r]);
                const auto cl = static_cast<std::size_t>(labels[r]);
                level_class[lv][cl] += 1.0;
                level_count[lv] += 1.0;
                total_class[cl] += 1.0;
            }
            for (std::size_t lv = 0; lv < n_levels; ++lv) {
                const double nl = level_count[lv];
                const double nr = n - nl;
                if (nl < static_cast<double>(ctx.min_leaf) || nr < static_cast<double>(ctx.min_leaf)) {
                    continue;
                }
                std::vector<double> right(ctx.n_classes);
                for (std::size_t c = 0; c < ctx.n_classes; ++c) {
                    right[c] = total_class[c] - level_class[lv][c];
                }
                const double score = nl * gini(level_class[lv], nl) + nr * gini(right, nr);
                if (!best.found || score < best.score - 1e-12) {
                    best = {true, f, true, 0.0, static_cast<std::int32_t>(lv), score};
                }
            }
        } else {
            const auto& vals = t.cont(f);
            std::vector<std::pair<double, std::int32_t>> sorted;
            sorted.reserve(rows.size());
            for (std::size_t r : rows) sorted.emplace_back(vals[r], labels[r]);
            std::sort(sorted.begin(), sorted.end());
            std::vector<double> left(ctx.n_classes, 0.0), right(ctx.n_classes, 0.0);
            for (const auto& [v, c] : sorted) right[static_cast<std::size_t>(c)] += 1.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                left[static_cast<std::size_t>(sorted[i].second)] += 1.0;
                right[static_cast<std::size_t>(sorted[i].second)] -= 1.0;
                if (sorted[i].first == sorted[i + 1].first) continue;  // not a boundary
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                if (nl < static_cast<double>(ctx.min_leaf) || nr < static_cast<double>(ctx.min_leaf)) {
                    continue;
                }
                const double score = nl * gini(left, nl) + nr * gini(right, nr);
                if (!best.found || score < best.score - 1e-12) {
                    const double thr = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
                    best = {true, f, false, thr, 0, score};
                }
            }
        }
    }
    return best;
}

SplitChoice best_split_regress(const BuildContext& ctx, const std::vector<std::size_t>& rows,
                               const std::vector<std::size_t>& feats) {
    const Table& t = *ctx.data;
    const auto& target_vals = t.cont(ctx.target);
    const double n = static_cast<double>(rows.size());

    SplitChoice best;
    std::size_t examined = 0;
    for (std::size_t f : feats) {
        if (examined >= ctx.mtry && best.found) break;
        ++examined;
        if (t.schema().columns[f].is_categorical()) {
            const auto n_levels = t.schema().columns[f].categorical().levels.size();
            std::vector<double> lsum(n_levels, 0.0), lsumsq(n_levels, 0.0), lcount(n_levels, 0.0);
            double tsum = 0.0, tsumsq = 0.0;
            for (std::size_t r : rows) {
                const auto lv = static_cast<std::size_t>(t.cat(f)[r]);
                const double y = target_vals[r];
                lsum[lv] += y;
                lsumsq[lv] += y * y;
                lcount[lv] += 1.0;
                tsum += y;
                tsumsq += y * y;
            }
            for (std::size_t lv = 0; lv < n_levels; ++lv) {
                const double nl = lcount[lv];
                const double nr = n - nl;
                if (nl < static_cast<double>(ctx.min_leaf) || nr < static_cast<double>(ctx.min_leaf)) {
                    continue;
                }
                const double rsum = tsum - lsum[lv];
                const double rsumsq = tsumsq - lsumsq[lv];
                const double score = (lsumsq[lv] - lsum[lv] * lsum[lv] / nl) +
                                     (rsumsq - rsum * rsum / nr);
                if (!best.found || score < best.score - 1e-12) {
                    best = {true, f, true, 0.0, static_cast<std::int32_t>(lv), score};
                }
            }
        } else {
            const auto& vals = t.cont(f);
            std::vector<std::pair<double, double>> sorted;
            sorted.reserve(rows.size());
            for (std::size_t r : rows) sorted.emplace_back(vals[r], target_vals[r]);
            std::sort(sorted.begin(), sorted.end());
            double lsum = 0.0, lsumsq = 0.0;
            double rsum = 0.0, rsumsq = 0.0;
            for (const auto& [v, y] : sorted) {
                rsum += y;
                rsumsq += y * y;
            }
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const double y = sorted[i].second;
                lsum += y;
                lsumsq += y * y;
                rsum -= y;
                rsumsq -= y * y;
                if (sorted[i].first == sorted[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                if (nl < static_cast<double>(ctx.min_leaf) || nr < static_cast<double>(ctx.min_leaf)) {
                    continue;
                }
                const double score = (lsumsq - lsum * lsum / nl) + (rsumsq - rsum * rsum / nr);
                if (!best.found || score < best.score - 1e-12) {
                    const double thr = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
                    best = {true, f, false, thr, 0, score};
                }
            }
        }
    }
    return best;
}

bool node_is_pure(const BuildContext& ctx, const std::vector<std::size_t>& rows) {
    if (ctx.classify) {
        const auto& labels = ctx.data->cat(ctx.target);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (labels[rows[i]] != labels[rows[0]]) return false;
        }
        return true;
    }
    const auto& vals = ctx.data->cont(ctx.target);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (vals[rows[i]] != vals[rows[0]]) return false;
    }
    return true;
}

int make_leaf(DecisionTree& tree, const BuildContext& ctx, const std::vector<std::size_t>& rows) {
    TreeNode leaf;
    if (ctx.classify) {
        leaf.class_counts.assign(ctx.n_classes, 0.0);
        for (std::size_t r : rows) {
            leaf.class_counts[static_cast<std::size_t>(ctx.data->cat(ctx.target)[r])] += 1.0;
        }
    } else {
        double sum = 0.0;
        for (std::size_t r : rows) sum += ctx.data->cont(ctx.target)[r];
        leaf.mean = sum / static_cast<double>(rows.size());
    }
    tree.nodes.push_back(std::move(leaf));
    return static_cast<int>(tree.nodes.size() - 1);
}

int build_node(DecisionTree& tree, const BuildContext& ctx, std::vector<std::size_t>& rows,
               int depth) {
    if (depth >= ctx.max_depth || rows.size() < 2 * ctx.min_leaf || node_is_pure(ctx, rows)) {
        return make_leaf(tree, ctx, rows);
    }
    const auto feats = sample_features(ctx);
    const SplitChoice split = ctx.classify ? best_split_classify(ctx, rows, feats)
                                           : best_split_regress(ctx, rows, feats);
    if (!split.found) return make_leaf(tree, ctx, rows);

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        bool goes_left;
        if (split.is_categorical) {
            goes_left = ctx.data->cat(split.feature)[r] == split.level;
        } else {
            goes_left = ctx.data->cont(split.feature)[r] <= split.threshold;
        }
        (goes_left ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    TreeNode node;
    node.feature = static_cast<int>(split.feature);
    node.is_categorical = split.is_categorical;
    node.threshold = split.threshold;
    node.level = split.level;
    tree.nodes.push_back(node);
    const int self = static_cast<int>(tree.nodes.size() - 1);
    const int left = build_node(tree, ctx, left_rows, depth + 1);
    const int right = build_node(tree, ctx, right_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(self)].left = left;
    tree.nodes[static_cast<std::size_t>(self)].right = right;
    return self;
}

const TreeNode& descend(const DecisionTree& tree, const Table& rows, std::size_t row) {
    const TreeNode* node = &tree.nodes[0];
    while (node->feature >= 0) {
        bool goes_left;
        const auto f = static_cast<std::size_t>(node->feature);
        if (node->is_categorical) {
            goes_left = rows.cat(f)[row] == node->level;
        } else {
            goes_left = rows.cont(f)[row] <= node->threshold;
        }
        node = &tree.nodes[static_cast<std::size_t>(goes_left ? node->left : node->right)];
    }
    return *node;
}

}  // namespace

RandomForest RandomForest::fit_classify(const Table& train, const std::string& target,
                                        const ForestConfig& cfg) {
    return fit(train, target, cfg, true);
}

RandomForest RandomForest::fit_regress(const Table& train, const std::string& target,
                                       const ForestConfig& cfg) {
    return fit(train, target, cfg, false);
}

RandomForest RandomForest::fit(const Table& train, const std::string& target,
                               const ForestConfig& cfg, bool classify) {
    if (train.n_rows() == 0) throw DomainError("random forest: empty training table");
    const std::size_t target_col = train.schema().index_of(target);
    if (classify != train.schema().columns[target_col].is_categorical()) {
        throw DomainError("random forest: target kind does not match task");
    }

    RandomForest forest;
    forest.target_ = target_col;
    forest.classify_ = classify;
    forest.n_classes_ =
        classify ? train.schema().columns[target_col].categorical().levels.size() : 0;
    for (std::size_t c = 0; c < train.n_cols(); ++c) {
        if (c != target_col) forest.features_.push_back(c);
    }
    const std::size_t d = forest.features_.size();
    const std::size_t mtry =
        classify ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))))
                 : std::max<std::size_t>(1, d / 3);

    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        Rng rng(cfg.seed + t);  // per-tree derived seed: seed + tree index
        std::vector<std::size_t> rows;
        rows.reserve(train.n_rows());
        if (cfg.bootstrap) {
            for (std::size_t i = 0; i < train.n_rows(); ++i) rows.push_back(rng.below(train.n_rows()));
        } else {
            rows.resize(train.n_rows());
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        forest.bootstrap_indices_.push_back(rows);

        BuildContext ctx;
        ctx.data = &train;
        ctx.features = forest.features_;
        ctx.target = target_col;
        ctx.classify = classify;
        ctx.n_classes = forest.n_classes_;
        ctx.mtry = mtry;
        ctx.max_depth = cfg.max_depth;
        ctx.min_leaf = cfg.min_samples_leaf;
        ctx.rng = &rng;

        DecisionTree tree;
        build_node(tree, ctx, rows, 0);
        forest.trees_.push_back(std::move(tree));
    }
    return forest;
}

std::vector<std::int32_t> RandomForest::predict_class(const Table& rows) const {
    std::vector<std::int32_t> out(rows.n_rows());
    std::vector<std::size_t> votes(n_classes_);
    for (std::size_t r = 0; r < rows.n_rows(); ++r) {
        std::fill(votes.begin(), votes.end(), std::size_t{0});
        for (const auto& tree : trees_) {
            const TreeNode& leaf = descend(tree, rows, r);
            std::size_t best = 0;
            for (std::size_t c = 1; c < leaf.class_counts.size(); ++c) {
                if (leaf.class_counts[c] > leaf.class_counts[best]) best = c;
            }
            ++votes[best];
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < votes.size(); ++c) {
            if (votes[c] > votes[best]) best = c;  // ties keep the lowest class index
        }
        out[r] = static_cast<std::int32_t>(best);
    }
    return out;
}

std::vector<double> RandomForest::predict_value(const Table& rows) const {
    std::vector<double> out(rows.n_rows(), 0.0);
    for (std::size_t r = 0; r < rows.n_rows(); ++r) {
        double sum = 0.0;
        for (const auto& tree : trees_) sum += descend(tree, rows, r).mean;
        out[r] = sum / static_cast<double>(trees_.size());
    }
    return out;
}

std::int32_t RandomForest::predict_class_tree(std::size_t tree, const Table& rows,
                                              std::size_t row) const {
    const TreeNode& leaf = descend(trees_[tree], rows, row);
    std::size_t best = 0;
    for (std::size_t c = 1; c < leaf.class_counts.size(); ++c) {
        if (leaf.class_counts[c] > leaf.class_counts[best]) best = c;
    }
    return static_cast<std::int32_t>(best);
}

double RandomForest::predict_value_tree(std::size_t tree, const Table& rows,
                                        std::size_t row) const {
    return descend(trees_[tree], rows, row).mean;
}

}  // namespace synthbench
