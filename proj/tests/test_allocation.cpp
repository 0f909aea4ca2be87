#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "compclass/allocation.hpp"
#include "compclass/core.hpp"
#include "allocation_oracle.hpp"

using namespace compclass;

using oracle::enumerate_min_total;

TEST_CASE("known allocations") {
    CHECK(solve_measurement_allocation({11, 64, 14, 0.0}).total == 10);
    CHECK(solve_measurement_allocation({12, 64, 9, 0.0}).total == 10);

    const auto sol = solve_measurement_allocation({3, 8, 2, 0.5});
    CHECK(sol.total == enumerate_min_total(3, 8, 2, 0.5).value());
    // Frozen from the enumeration oracle.
    CHECK(sol.total == 2);
    CHECK(sol.per_class == std::vector<int>{1, 1, 0});
}

TEST_CASE("allocation invariants") {
    const AllocationProblem p{5, 12, 3, 0.25};
    const auto sol = solve_measurement_allocation(p);
    int sum = 0;
    for (std::size_t k = 0; k < sol.per_class.size(); ++k) {
        sum += sol.per_class[k];
        CHECK(sol.per_class[k] >= 0);
        CHECK(sol.per_class[k] <= 12 - 3);
        if (k) CHECK(sol.per_class[k] <= sol.per_class[k - 1]);
    }
    CHECK(sum == sol.total);
    CHECK(allocation_feasible(p, sol.per_class));
    CHECK(sol.target == 0.25);
}

TEST_CASE("infeasible and malformed targets") {
    CHECK_THROWS_AS(solve_measurement_allocation({3, 8, 2, 1.0}), InfeasibleDesign);
    CHECK_THROWS_AS(solve_measurement_allocation({3, 8, 0, 0.0}), InfeasibleDesign);
    CHECK_THROWS_AS(solve_measurement_allocation({3, 8, 8, 0.0}), ValidationError);
    CHECK_THROWS_AS(solve_measurement_allocation({0, 8, 2, 0.0}), ValidationError);
    CHECK_THROWS_AS(solve_measurement_allocation({3, 8, 2, -1.0}), ValidationError);
    CHECK_THROWS_AS(solve_measurement_allocation({3, 8, 2, std::nan("")}), ValidationError);
}

TEST_CASE("matches exhaustive enumeration on small instances") {
    int compared = 0;
    for (int classes = 1; classes <= 5; ++classes)
        for (int n = 1; n <= 12; ++n)
            for (int r = 0; r <= std::min(4, n - 1); ++r)
                for (double d0 : {0.0, 0.25, 0.5}) {
                    CAPTURE(classes);
                    CAPTURE(n);
                    CAPTURE(r);
                    CAPTURE(d0);
                    const AllocationProblem p{classes, n, r, d0};
                    if (d0 >= p.separation() / 4.0) {
                        CHECK_THROWS_AS(solve_measurement_allocation(p), InfeasibleDesign);
                        continue;
                    }
                    const auto oracle = enumerate_min_total(classes, n, r, d0);
                    if (!oracle) {
                        CHECK_THROWS_AS(solve_measurement_allocation(p), InfeasibleDesign);
                        continue;
                    }
                    const auto sol = solve_measurement_allocation(p);
                    CHECK(sol.total == *oracle);
                    CHECK(allocation_feasible(p, sol.per_class));
                    ++compared;
                }
    CHECK(compared > 300);
}

TEST_CASE("phase-transition allocation is min{L - 1, r + 1}") {
    Rng rng(2024);
    for (int t = 0; t < 20; ++t) {
        const int classes = std::uniform_int_distribution<int>(2, 16)(rng);
        const int r = std::uniform_int_distribution<int>(1, 12)(rng);
        const int n = std::uniform_int_distribution<int>(2 * r + 2, 64)(rng);
        CAPTURE(classes);
        CAPTURE(r);
        CAPTURE(n);
        CHECK(solve_measurement_allocation({classes, n, r, 0.0}).total == std::min(classes - 1, r + 1));
    }
}
