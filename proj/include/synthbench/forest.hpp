#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthbench/schema.hpp"

namespace synthbench {

// Axis-aligned splits: continuous thresholds at midpoints of sorted unique
// values, categorical one-vs-rest on single levels.
struct TreeNode {
    int feature = -1;  // schema column index; -1 marks a leaf
    bool is_categorical = false;
    double threshold = 0.0;    // continuous: goes left when value <= threshold
    std::int32_t level = 0;    // categorical: goes left when value == level
    int left = -1;
    int right = -1;
    std::vector<double> class_counts;  // classification leaves
    double mean = 0.0;                 // regression leaves
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
};

struct ForestConfig {
    std::size_t n_trees = 200;
    int max_depth = 16;
    std::size_t min_samples_leaf = 2;
    bool bootstrap = true;
    std::uint64_t seed = 42;
};

class RandomForest {
public:
    // Gini-impurity splits, sqrt(d) features per split. Tree t uses seed + t.
    static RandomForest fit_classify(const Table& train, const std::string& target,
                                     const ForestConfig& cfg);
    // Variance-reduction splits, d/3 features per split.
    static RandomForest fit_regress(const Table& train, const std::string& target,
                                    const ForestConfig& cfg);

    // Majority vote over trees (ties -> lowest class index).
    std::vector<std::int32_t> predict_class(const Table& rows) const;
    // Mean over trees.
    std::vector<double> predict_value(const Table& rows) const;

    std::int32_t predict_class_tree(std::size_t tree, const Table& rows, std::size_t row) const;
    double predict_value_tree(std::size_t tree, const Table& rows, std::size_t row) const;

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const std::vector<std::vector<std::size_t>>& bootstrap_indices() const {
        return bootstrap_indices_;
    }

private:
    static RandomForest fit(const Table& train, const std::string& target,
                            const ForestConfig& cfg, bool classify);

    std::vector<DecisionTree> trees_;
    std::vector<std::vector<std::size_t>> bootstrap_indices_;
    std::vector<std::size_t> features_;
    std::size_t target_ = 0;
    bool classify_ = true;
    std::size_t n_classes_ = 0;
};

}  // namespace synthbench
