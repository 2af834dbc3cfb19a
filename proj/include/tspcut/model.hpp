#ifndef TSPCUT_MODEL_HPP
#define TSPCUT_MODEL_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "tspcut/errors.hpp"

namespace tspcut {

/// Directed arc between 0-based vertices.
struct Arc {
  int from = 0;
  int to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// A TSP instance: vertex count, symmetric real cost matrix, and the
/// candidate arc set (complete or CAF-reduced). Immutable after construction.
class Instance {
public:
  /// Costs are row-major n*n; the diagonal is never read. Arcs must be
  /// self-loop-free with endpoints in [0, n).
  Instance(int n, std::vector<double> costs, std::vector<Arc> arcs);

  /// Instance over the complete directed arc set (all (i,j), i != j).
  static Instance complete(int n, std::vector<double> costs);

  int n() const { return n_; }
  double cost(int i, int j) const { return costs_[static_cast<size_t>(i) * n_ + j]; }
  double max_cost() const { return max_cost_; }

  /// Candidate arcs in ascending (from, to) order.
  const std::vector<Arc>& arcs() const { return arcs_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  bool has_arc(int i, int j) const { return arc_index(i, j) >= 0; }
  /// Position of (i,j) in arcs(), or -1 if absent.
  int arc_index(int i, int j) const {
    return arc_index_[static_cast<size_t>(i) * n_ + j];
  }

  const std::vector<double>& cost_matrix() const { return costs_; }

private:
  int n_;
  std::vector<double> costs_;
  std::vector<Arc> arcs_;
  std::vector<int> arc_index_;
  double max_cost_ = 0.0;
};

/// Subtour elimination cut: sum of selected arcs with both endpoints in S
/// must not exceed |S|-1. S is a proper subset of V with |S| >= 2.
class SecCut {
public:
  /// Members are 0-based vertices; sorted and deduplicated on construction.
  explicit SecCut(std::vector<int> members);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  int rhs() const { return size() - 1; }

  /// Vertex-set bitmask; valid for vertices < 64.
  std::uint64_t mask() const { return mask_; }

  bool contains(int v) const { return (mask_ >> v) & 1u; }

  friend bool operator==(const SecCut& a, const SecCut& b) {
    return a.members_ == b.members_;
  }

private:
  std::vector<int> members_;
  std::uint64_t mask_ = 0;
};

/// The CPA master problem: objective + degree constraints over the instance
/// arc set, plus the currently active cuts. Cut subsets stay distinct.
class RestrictedModel {
public:
  explicit RestrictedModel(Instance instance) : instance_(std::move(instance)) {}

  const Instance& instance() const { return instance_; }
  const std::vector<SecCut>& cuts() const { return cuts_; }
  int num_cuts() const { return static_cast<int>(cuts_.size()); }

  /// Returns false (and leaves the model unchanged) if an equal subset is
  /// already active. Members must lie in [0, n) and |S| <= n-1.
  bool add_cut(SecCut cut);
  bool has_cut_subset(std::uint64_t mask) const {
    return cut_masks_.contains(mask);
  }

private:
  Instance instance_;
  std::vector<SecCut> cuts_;
  std::unordered_set<std::uint64_t> cut_masks_;
};

/// A binary arc selection with its objective and feasibility summary.
struct ArcSolution {
  std::vector<Arc> selected;  // ascending (from, to)
  double objective = 0.0;
  bool degree_feasible = false;
  /// Directed cycles when degree feasible; weakly-connected components
  /// otherwise (diagnostic only).
  int cycle_count = 0;
};

struct ComplexityStats {
  std::int64_t num_vars = 0;
  std::int64_t num_degree_constraints = 0;
  std::int64_t num_sec_constraints = 0;
  std::int64_t total_constraints() const {
    return num_degree_constraints + num_sec_constraints;
  }
};

/// Number of degree constraints of the formulation: one incoming and one
/// outgoing equality per vertex, 2n in total.
int degree_constraint_count(int n);

/// Number of subtour elimination constraints of the complete formulation:
/// one per subset S with 2 <= |S| <= n-1, i.e. 2^n - 2 - n.
/// Valid for 3 <= n <= 62; throws TooLarge beyond.
std::int64_t sec_count_complete(int n);

/// Materializes every SEC of the complete formulation. Guarded at n <= 22.
std::vector<SecCut> enumerate_all_secs(int n);

/// Evaluates an arc selection against the model: objective sum, degree
/// feasibility, cycle decomposition. Throws UnknownArc for arcs outside the
/// instance arc set.
ArcSolution evaluate(const RestrictedModel& model, const std::vector<Arc>& selected);

/// Active cuts violated by the selection, in model cut order.
std::vector<int> violated_cuts(const RestrictedModel& model, const ArcSolution& sol);

/// Model size statistics. With cilp=true the SEC count is the full 2^n-2-n;
/// otherwise it is the number of active cuts.
ComplexityStats complexity_of(const RestrictedModel& model, bool cilp);

}  // namespace tspcut

#endif  // TSPCUT_MODEL_HPP
