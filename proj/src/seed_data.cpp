#include "synthbench/seed_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "synthbench/errors.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

namespace {

// Source marginals: race C 32% / A 7%, free-reduced lunch 36%, prep 33%.
// Race<->lunch coupling keeps the lunch marginal while giving the class
// target a categorical correlate. Race score profiles are nearly separable
// bands: the source benchmark's TSTR of 0.997 on this 5-class target implies
// race is almost deterministically recoverable from the other features, and
// the stand-in reproduces that regime.
constexpr std::array<double, 2> kGender = {0.48, 0.52};
constexpr std::array<double, 5> kRace = {0.07, 0.21, 0.32, 0.22, 0.18};
constexpr std::array<double, 6> kParent = {0.16, 0.20, 0.22, 0.18, 0.14, 0.10};
constexpr std::array<double, 5> kLunchFreeByRace = {0.60, 0.45, 0.36, 0.30, 0.25};
constexpr double kPrep = 0.33;

constexpr std::array<double, 5> kRaceBase = {38.0, 52.0, 65.0, 78.0, 91.0};
// columns: Math, Reading, Writing, Science
constexpr std::array<std::array<double, 4>, 5> kSubjectOffset = {{
    {0.0, 2.0, 1.5, 1.0},
    {1.0, 2.5, 2.0, 0.0},
    {1.0, 3.0, 2.0, 1.0},
    {1.0, 0.0, 0.5, 2.0},
    {0.0, 1.0, 1.0, 0.0},
}};
constexpr double kAbilitySd = 3.0;
constexpr double kNoiseSd = 1.0;
constexpr std::array<double, 4> kPrepEffect = {1.0, 1.5, 2.0, 1.0};
constexpr std::array<double, 4> kLunchEffect = {-2.0, -1.5, -1.5, -1.5};
constexpr double kParentEffect = 0.5;

template <std::size_t N>
std::vector<double> cumulative(const std::array<double, N>& p) {
    std::vector<double> c(N);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        acc += p[i];
        c[i] = acc;
    }
    return c;
}

}  // namespace

Table seed_dataset(std::size_t n_rows, std::uint64_t seed, bool total_is_sum) {
    if (n_rows == 0) throw DomainError("seed_dataset: n_rows must be >= 1");
    Rng rng(derive_seed(seed, "seed-dataset"));
    const auto cum_gender = cumulative(kGender);
    const auto cum_race = cumulative(kRace);
    const auto cum_parent = cumulative(kParent);

    Table t(student_schema());
    t.resize_rows(n_rows);
    auto& gender = t.cat(0);
    auto& race = t.cat(1);
    auto& parent = t.cat(2);
    auto& lunch = t.cat(3);
    auto& prep = t.cat(4);
    std::array<std::vector<double>*, 4> subjects = {&t.cont(5), &t.cont(6), &t.cont(7),
                                                    &t.cont(8)};
    auto& total = t.cont(9);

    for (std::size_t r = 0; r < n_rows; ++r) {
        gender[r] = static_cast<std::int32_t>(rng.categorical(cum_gender));
        const auto rc = rng.categorical(cum_race);
        race[r] = static_cast<std::int32_t>(rc);
        parent[r] = static_cast<std::int32_t>(rng.categorical(cum_parent));
        lunch[r] = rng.uniform01() < kLunchFreeByRace[rc] ? 1 : 0;
        prep[r] = rng.uniform01() < kPrep ? 1 : 0;

        const double ability = rng.normal(0.0, kAbilitySd);
        double sum = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            double v = kRaceBase[rc] + kSubjectOffset[rc][s] + ability + rng.normal(0.0, kNoiseSd);
            if (prep[r]) v += kPrepEffect[s];
            if (lunch[r]) v += kLunchEffect[s];
            v += kParentEffect * static_cast<double>(parent[r]);
            v = std::clamp(std::round(v), 0.0, 100.0);
            (*subjects[s])[r] = v;
            sum += v;
        }
        if (total_is_sum) {
            total[r] = sum;
        } else {
            total[r] = std::clamp(std::round(rng.uniform(0.0, 400.0)), 0.0, 400.0);
        }
    }
    return t;
}

}  // namespace synthbench
