#pragma once

#include <cstdint>

#include "synthbench/schema.hpp"

namespace synthbench {

// Deterministic stand-in for the student performance dataset: categorical
// marginals match the source proportions (race C 32% / A 7%, standard lunch
// 64%, no test prep 67%), subject scores are correlated truncated integers on
// [0,100], and TotalScore defaults to the sum of the four subjects.
// Throws DomainError when n_rows == 0.
Table seed_dataset(std::size_t n_rows, std::uint64_t seed, bool total_is_sum = true);

}  // namespace synthbench
