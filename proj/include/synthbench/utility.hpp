#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "synthbench/schema.hpp"

namespace synthbench {

// R^2 of a constant true vector with imperfect predictions (TSS == 0, RSS > 0).
inline constexpr double kR2Undefined = -std::numeric_limits<double>::max();

double mse(const std::vector<double>& y, const std::vector<double>& yhat);
double mae(const std::vector<double>& y, const std::vector<double>& yhat);
// Eq.: 1 - RSS/TSS; constant y gives 1 when predictions match exactly,
// kR2Undefined otherwise.
double r2(const std::vector<double>& y, const std::vector<double>& yhat);

// Seeded stratified holdout on the class target (largest-remainder
// apportionment, exact total = round(test_fraction * n)). Throws DomainError
// when a class cannot contribute to both splits.
std::pair<Table, Table> split_holdout(const Table& real, double test_fraction,
                                      std::uint64_t seed);

struct TSTRResult {
    double classification_accuracy = 0.0;
    double regression_r2 = 0.0;
    double regression_mae = 0.0;
    double ml_utility = 0.0;  // (accuracy + max(0, r2)) / 2

    double baseline_accuracy = 0.0;  // train-on-real, same holdout and seeds
    double baseline_r2 = 0.0;
    double baseline_mae = 0.0;
    double baseline_utility = 0.0;
};

// Train-on-synthetic / test-on-real: classifier (200 trees) on the class
// target, regressor (300 trees) on the regression target, both trained on
// `synth` and scored on a 30% stratified holdout of `real`; the train-on-real
// baseline shares the holdout and forest seeds.
TSTRResult tstr(const Table& synth, const Table& real, const std::string& class_target,
                const std::string& regression_target, std::uint64_t seed);

}  // namespace synthbench
