#include "tspcut/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace tspcut {

Instance::Instance(int n, std::vector<double> costs, std::vector<Arc> arcs)
    : n_(n), costs_(std::move(costs)), arcs_(std::move(arcs)) {
  if (n < 3) throw OutOfRange("instance needs at least 3 vertices");
  if (costs_.size() != static_cast<size_t>(n) * n)
    throw OutOfRange("cost matrix size does not match n");
  std::sort(arcs_.begin(), arcs_.end());
  arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
  arc_index_.assign(static_cast<size_t>(n) * n, -1);
  for (size_t t = 0; t < arcs_.size(); ++t) {
    const auto [i, j] = arcs_[t];
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw OutOfRange("arc endpoint outside [0, n)");
    if (i == j) throw OutOfRange("self-loop arc");
    arc_index_[static_cast<size_t>(i) * n + j] = static_cast<int>(t);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) max_cost_ = std::max(max_cost_, cost(i, j));
}

Instance Instance::complete(int n, std::vector<double> costs) {
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) arcs.push_back({i, j});
  return Instance(n, std::move(costs), std::move(arcs));
}

SecCut::SecCut(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.size() < 2) throw OutOfRange("SEC subset needs |S| >= 2");
  for (int v : members_) {
    if (v < 0 || v >= 64) throw OutOfRange("SEC vertex outside supported range");
    mask_ |= std::uint64_t{1} << v;
  }
}

bool RestrictedModel::add_cut(SecCut cut) {
  const int n = instance_.n();
  if (cut.size() > n - 1) throw OutOfRange("SEC subset must be proper");
  if (cut.members().back() >= n) throw OutOfRange("SEC vertex outside instance");
  if (!cut_masks_.insert(cut.mask()).second) return false;
  cuts_.push_back(std::move(cut));
  return true;
}

int degree_constraint_count(int n) { return 2 * n; }

std::int64_t sec_count_complete(int n) {
  if (n < 3) throw OutOfRange("n must be at least 3");
  if (n > 62) throw TooLarge("2^n - 2 - n overflows past n = 62");
  return (std::int64_t{1} << n) - 2 - n;
}

std::vector<SecCut> enumerate_all_secs(int n) {
  if (n < 3) throw OutOfRange("n must be at least 3");
  if (n > 22) throw TooLarge("full SEC enumeration guarded at n <= 22");
  std::vector<SecCut> cuts;
  cuts.reserve(static_cast<size_t>(sec_count_complete(n)));
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t s = 1; s < full; ++s) {
    if (std::popcount(s) < 2) continue;
    std::vector<int> members;
    members.reserve(static_cast<size_t>(std::popcount(s)));
    for (int v = 0; v < n; ++v)
      if ((s >> v) & 1u) members.push_back(v);
    cuts.emplace_back(std::move(members));
  }
  return cuts;
}

namespace {

// Cycles of the successor permutation, as sorted vertex lists.
int count_cycles(const std::vector<int>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<char> seen(n, 0);
  int cycles = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (int v = s; !seen[v]; v = succ[v]) seen[v] = 1;
  }
  return cycles;
}

// Weakly-connected components of the selection, for infeasible diagnostics.
int count_weak_components(int n, const std::vector<Arc>& selected) {
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Arc& a : selected) {
    int ra = find(a.from), rb = find(a.to);
    if (ra != rb) parent[ra] = rb;
  }
  int comps = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++comps;
  return comps;
}

}  // namespace

ArcSolution evaluate(const RestrictedModel& model, const std::vector<Arc>& selected) {
  const Instance& inst = model.instance();
  const int n = inst.n();

  ArcSolution sol;
  sol.selected = selected;
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.selected.erase(std::unique(sol.selected.begin(), sol.selected.end()),
                     sol.selected.end());

  std::vector<int> out_deg(n, 0), in_deg(n, 0), succ(n, -1);
  for (const Arc& a : sol.selected) {
    if (!inst.has_arc(a.from, a.to))
      throw UnknownArc("selected arc not in the instance arc set");
    sol.objective += inst.cost(a.from, a.to);
    ++out_deg[a.from];
    ++in_deg[a.to];
    succ[a.from] = a.to;
  }

  sol.degree_feasible = true;
  for (int v = 0; v < n; ++v) {
    if (out_deg[v] != 1 || in_deg[v] != 1) {
      sol.degree_feasible = false;
      break;
    }
  }
  sol.cycle_count = sol.degree_feasible ? count_cycles(succ)
                                        : count_weak_components(n, sol.selected);
  return sol;
}

std::vector<int> violated_cuts(const RestrictedModel& model, const ArcSolution& sol) {
  std::vector<int> violated;
  const auto& cuts = model.cuts();
  for (size_t c = 0; c < cuts.size(); ++c) {
    const std::uint64_t mask = cuts[c].mask();
    int inside = 0;
    for (const Arc& a : sol.selected)
      if (((mask >> a.from) & 1u) && ((mask >> a.to) & 1u)) ++inside;
    if (inside > cuts[c].rhs()) violated.push_back(static_cast<int>(c));
  }
  return violated;
}

ComplexityStats complexity_of(const RestrictedModel& model, bool cilp) {
  ComplexityStats stats;
  stats.num_vars = model.instance().num_arcs();
  stats.num_degree_constraints = degree_constraint_count(model.instance().n());
  stats.num_sec_constraints =
      cilp ? sec_count_complete(model.instance().n()) : model.num_cuts();
  return stats;
}

}  // namespace tspcut
