#pragma once

#include <span>
#include <vector>

namespace compclass {

// Integer program for per-class null-space measurement counts M_i:
//
//   minimize M = sum M_i  s.t.  0 <= M_i <= N - r  and, for all i != j,
//     f - 2(M - 2r) > d0,  f - 2(M_i - r) > d0,  f - 2(M_j - r) > d0,  f > d0
//   where f = max{M - r, M_i} + max{M - r, M_j}.
//
// The constraints are evaluated exactly in this undivided form.
struct AllocationProblem {
    int classes = 0;
    int ambient_dim = 0;
    int class_rank = 0;
    double target = 0.0; // d0

    // Throws ValidationError for malformed parameters and InfeasibleDesign
    // when d0 >= R/4 with R = 2 min{N - r, r}.
    void validate() const;
    int separation() const;
};

struct DesignAllocation {
    std::vector<int> per_class; // nonincreasing
    int total = 0;
    double target = 0.0;
};

bool allocation_feasible(const AllocationProblem& problem, std::span<const int> counts);

// Branch and bound over nonincreasing allocations (classes are exchangeable),
// deepening on the total M so the first feasible leaf is optimal.
DesignAllocation solve_measurement_allocation(const AllocationProblem& problem);

} // namespace compclass
