#ifndef TSPCUT_EXACT_HPP
#define TSPCUT_EXACT_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "tspcut/model.hpp"

namespace tspcut {

/// Matrix value marking a forbidden assignment entry.
inline constexpr double kMaskedCost = std::numeric_limits<double>::infinity();

struct ExactResult {
  ArcSolution solution;
  bool optimal = false;
  std::int64_t nodes_explored = 0;
  double wall_time_s = 0.0;
};

/// Minimum-cost perfect matching on the bipartite out/in graph of a square
/// row-major matrix; entries equal to kMaskedCost are forbidden. The result
/// is degree feasible by construction. Throws Infeasible when every perfect
/// matching hits a masked entry.
ArcSolution hungarian_assignment(int n, std::span<const double> costs);

struct ExactOptions {
  std::optional<double> budget_s;          // wall-clock cap; none = unlimited
  std::optional<std::int64_t> node_budget; // explored-node cap
};

/// Branch-and-bound over the assignment relaxation. Each node solves the
/// degree-constraints-only matching; a matching violating an active cut is
/// split by forbidding, in mutually exclusive subproblems, each selected arc
/// inside the violated subset. Only active cuts prune; no new SECs are
/// invented here. optimal=false means a budget ran out and the incumbent is
/// returned. Throws Infeasible when no selection satisfies the constraints.
ExactResult solve_restricted_exact(const RestrictedModel& model,
                                   const ExactOptions& opts = {});

/// Optimal Hamiltonian tour by dynamic programming over vertex subsets.
/// Guarded at n <= 18; arcs missing from a reduced instance count as
/// unusable. Throws Infeasible when the (reduced) graph has no tour.
ExactResult held_karp(const Instance& instance);

/// Minimum over all directed tours fixing vertex 0 first. Guarded at n <= 10.
ExactResult brute_force_tsp(const Instance& instance);

}  // namespace tspcut

#endif  // TSPCUT_EXACT_HPP
