#include "compclass/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "compclass/core.hpp"

namespace compclass {

int AllocationProblem::separation() const { return 2 * std::min(ambient_dim - class_rank, class_rank); }

void AllocationProblem::validate() const {
    if (classes < 1) throw ValidationError("allocation needs at least one class");
    if (class_rank < 0 || ambient_dim < 1 || class_rank >= ambient_dim)
        throw ValidationError("allocation needs 0 <= r < N");
    if (!(target >= 0.0) || !std::isfinite(target)) throw ValidationError("target exponent must be finite and >= 0");
    if (target >= separation() / 4.0)
        throw InfeasibleDesign("target exponent " + std::to_string(target) + " is not below R/4 = " +
                               std::to_string(separation() / 4.0));
}

namespace {

bool pair_ok(int total, int ci, int cj, int r, double d0) {
    const int f = std::max(total - r, ci) + std::max(total - r, cj);
    return f - 2 * (total - 2 * r) > d0 && f - 2 * (ci - r) > d0 && f - 2 * (cj - r) > d0 && f > d0;
}

struct Search {
    const AllocationProblem& problem;
    int total = 0;
    std::vector<int> counts;

    bool place(std::size_t pos, int remaining, int cap) {
        const auto slots = counts.size() - pos;
        if (slots == 0) return remaining == 0;
        if (static_cast<long>(remaining) > static_cast<long>(slots) * cap) return false;
        const int lo = (remaining + static_cast<int>(slots) - 1) / static_cast<int>(slots);
        for (int c = std::min(cap, remaining); c >= lo; --c) {
            bool ok = true;
            for (std::size_t k = 0; k < pos && ok; ++k)
                ok = pair_ok(total, counts[k], c, problem.class_rank, problem.target);
            if (!ok) continue;
            counts[pos] = c;
            if (place(pos + 1, remaining - c, c)) return true;
        }
        return false;
    }
};

} // namespace

bool allocation_feasible(const AllocationProblem& problem, std::span<const int> counts) {
    if (static_cast<int>(counts.size()) != problem.classes) return false;
    const int cap = problem.ambient_dim - problem.class_rank;
    for (int c : counts)
        if (c < 0 || c > cap) return false;
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (std::size_t j = i + 1; j < counts.size(); ++j)
            if (!pair_ok(total, counts[i], counts[j], problem.class_rank, problem.target)) return false;
    return true;
}

DesignAllocation solve_measurement_allocation(const AllocationProblem& problem) {
    problem.validate();
    const int cap = problem.ambient_dim - problem.class_rank;
    Search search{problem, 0, std::vector<int>(static_cast<std::size_t>(problem.classes), 0)};
    for (int total = 0; total <= problem.classes * cap; ++total) {
        search.total = total;
        std::fill(search.counts.begin(), search.counts.end(), 0);
        if (search.place(0, total, cap)) return {search.counts, total, problem.target};
    }
    throw InfeasibleDesign("no allocation satisfies the exponent constraints");
}

} // namespace compclass
