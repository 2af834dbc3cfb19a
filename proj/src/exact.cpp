#include "tspcut/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

namespace tspcut {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shortest-augmenting-path Hungarian with potentials, O(n^3) from scratch.
// Masked entries are replaced by a finite sentinel larger than any full
// assignment of real costs, so a matching that uses one certifies
// infeasibility. The dual state can be reused: after masking additional
// entries (costs only increase) the potentials stay feasible and only rows
// whose matched entry became masked need re-augmenting, which is how the
// branch-and-bound keeps child solves at O(n^2).
struct AssignmentState {
  std::vector<double> u, v;  // 1-based potentials
  std::vector<int> p;        // p[j] = row matched to column j, 0 = free
};

class AssignmentSolver {
public:
  AssignmentSolver(int n, double sentinel) : n_(n), sentinel_(sentinel) {}

  AssignmentState fresh_state() const {
    AssignmentState s;
    s.u.assign(static_cast<size_t>(n_) + 1, 0.0);
    s.v.assign(static_cast<size_t>(n_) + 1, 0.0);
    s.p.assign(static_cast<size_t>(n_) + 1, 0);
    return s;
  }

  void augment_row(AssignmentState& s, std::span<const double> costs, int row) {
    const double kInf = std::numeric_limits<double>::max();
    std::vector<double> minv(static_cast<size_t>(n_) + 1, kInf);
    std::vector<int> way(static_cast<size_t>(n_) + 1, 0);
    std::vector<char> used(static_cast<size_t>(n_) + 1, 0);

    s.p[0] = row;
    int j0 = 0;
    do {
      used[static_cast<size_t>(j0)] = 1;
      const int i0 = s.p[static_cast<size_t>(j0)];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n_; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur =
            at(costs, i0 - 1, j - 1) - s.u[static_cast<size_t>(i0)] -
            s.v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n_; ++j) {
        if (used[static_cast<size_t>(j)]) {
          s.u[static_cast<size_t>(s.p[static_cast<size_t>(j)])] += delta;
          s.v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (s.p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      s.p[static_cast<size_t>(j0)] = s.p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  void solve(AssignmentState& s, std::span<const double> costs) {
    for (int row = 1; row <= n_; ++row) augment_row(s, costs, row);
  }

  // Drops matched pairs that the given matrix now masks and re-augments just
  // those rows.
  void repair(AssignmentState& s, std::span<const double> costs) {
    std::vector<int> dirty;
    for (int j = 1; j <= n_; ++j) {
      const int i = s.p[static_cast<size_t>(j)];
      if (i > 0 && costs[static_cast<size_t>(i - 1) * n_ + (j - 1)] == kMaskedCost) {
        s.p[static_cast<size_t>(j)] = 0;
        dirty.push_back(i);
      }
    }
    for (int row : dirty) augment_row(s, costs, row);
  }

  // True objective over the original matrix; infeasible when any matched
  // entry is masked.
  bool extract(const AssignmentState& s, std::span<const double> costs,
               std::vector<int>& match_col_of_row, double& objective) const {
    match_col_of_row.assign(static_cast<size_t>(n_), -1);
    objective = 0.0;
    for (int j = 1; j <= n_; ++j) {
      const int i = s.p[static_cast<size_t>(j)];
      if (i <= 0) return false;
      const double c = costs[static_cast<size_t>(i - 1) * n_ + (j - 1)];
      if (c == kMaskedCost) return false;
      match_col_of_row[static_cast<size_t>(i - 1)] = j - 1;
      objective += c;
    }
    return true;
  }

private:
  double at(std::span<const double> costs, int i, int j) const {
    const double c = costs[static_cast<size_t>(i) * n_ + j];
    return c == kMaskedCost ? sentinel_ : c;
  }

  int n_;
  double sentinel_;
};

double masked_sentinel(int n, std::span<const double> costs) {
  double max_finite = 0.0;
  for (double c : costs)
    if (c != kMaskedCost) max_finite = std::max(max_finite, c);
  return n * max_finite + 1.0;
}

int cycles_of_permutation(const std::vector<int>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<char> seen(static_cast<size_t>(n), 0);
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<size_t>(s)]) continue;
    ++count;
    for (int v = s; !seen[static_cast<size_t>(v)]; v = succ[static_cast<size_t>(v)])
      seen[static_cast<size_t>(v)] = 1;
  }
  return count;
}

ArcSolution solution_from_permutation(int n, const std::vector<int>& succ,
                                      double objective) {
  ArcSolution sol;
  sol.selected.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) sol.selected.push_back({i, succ[static_cast<size_t>(i)]});
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.objective = objective;
  sol.degree_feasible = true;
  sol.cycle_count = cycles_of_permutation(succ);
  return sol;
}

// First-improvement 2-opt on a tour, restricted to arcs the instance
// actually has. Tightens the initial upper bound only; the search result is
// unaffected beyond pruning.
void improve_tour_2opt(const Instance& inst, std::vector<int>& succ) {
  const int n = inst.n();
  std::vector<int> order(static_cast<size_t>(n));
  order[0] = 0;
  for (int i = 1; i < n; ++i)
    order[static_cast<size_t>(i)] = succ[static_cast<size_t>(order[i - 1])];

  bool improved = true;
  while (improved) {
    improved = false;
    for (int a = 0; a < n - 1 && !improved; ++a) {
      for (int b = a + 1; b < n && !improved; ++b) {
        // Reconnect order[a]->order[b] and order[a+1]->order[b+1], reversing
        // the segment in between.
        const int va = order[static_cast<size_t>(a)];
        const int va1 = order[static_cast<size_t>(a + 1)];
        const int vb = order[static_cast<size_t>(b)];
        const int vb1 = order[static_cast<size_t>((b + 1) % n)];
        if (va == vb || va1 == vb1) continue;
        if (!inst.has_arc(va, vb) || !inst.has_arc(va1, vb1)) continue;
        // Reversal also needs every reverse arc inside the segment.
        bool reversible = true;
        for (int t = a + 1; t < b && reversible; ++t)
          reversible = inst.has_arc(order[static_cast<size_t>(t + 1)],
                                    order[static_cast<size_t>(t)]);
        if (!reversible) continue;
        const double delta = inst.cost(va, vb) + inst.cost(va1, vb1) -
                             inst.cost(va, va1) - inst.cost(vb, vb1);
        if (delta < -1e-9) {
          std::reverse(order.begin() + a + 1, order.begin() + b + 1);
          improved = true;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i)
    succ[static_cast<size_t>(order[static_cast<size_t>(i)])] =
        order[static_cast<size_t>((i + 1) % n)];
}

// Merges the cycles of a degree-feasible matching into one tour by repeating
// the cheapest two-arc exchange across cycle pairs, then 2-opts the result.
// Upper bound device only; fails (nullopt) when the arc set lacks the needed
// reconnections.
std::optional<std::vector<int>> patch_cycles(const Instance& inst,
                                             std::vector<int> succ) {
  const int n = inst.n();
  while (true) {
    std::vector<int> cycle_id(static_cast<size_t>(n), -1);
    int cycles = 0;
    for (int s = 0; s < n; ++s) {
      if (cycle_id[static_cast<size_t>(s)] >= 0) continue;
      for (int v = s; cycle_id[static_cast<size_t>(v)] < 0;
           v = succ[static_cast<size_t>(v)])
        cycle_id[static_cast<size_t>(v)] = cycles;
      ++cycles;
    }
    if (cycles == 1) break;

    int best_i = -1, best_j = -1;
    double best_delta = 0.0;
    bool found = false;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (cycle_id[static_cast<size_t>(i)] == cycle_id[static_cast<size_t>(j)])
          continue;
        const int si = succ[static_cast<size_t>(i)], sj = succ[static_cast<size_t>(j)];
        if (!inst.has_arc(i, sj) || !inst.has_arc(j, si)) continue;
        const double delta = inst.cost(i, sj) + inst.cost(j, si) -
                             inst.cost(i, si) - inst.cost(j, sj);
        if (!found || delta < best_delta) {
          found = true;
          best_delta = delta;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!found) return std::nullopt;
    std::swap(succ[static_cast<size_t>(best_i)], succ[static_cast<size_t>(best_j)]);
  }
  improve_tour_2opt(inst, succ);
  return succ;
}

// Nearest-neighbor tour over the instance arc set; nullopt when the greedy
// walk dead-ends or the closing arc is missing.
std::optional<std::vector<int>> nearest_neighbor_tour(const Instance& inst) {
  const int n = inst.n();
  std::vector<int> succ(static_cast<size_t>(n), -1);
  std::vector<char> visited(static_cast<size_t>(n), 0);
  int cur = 0;
  visited[0] = 1;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_cost = 0.0;
    for (int j = 0; j < n; ++j) {
      if (visited[static_cast<size_t>(j)] || !inst.has_arc(cur, j)) continue;
      const double c = inst.cost(cur, j);
      if (best < 0 || c < best_cost || (c == best_cost && j < best)) {
        best = j;
        best_cost = c;
      }
    }
    if (best < 0) return std::nullopt;
    succ[static_cast<size_t>(cur)] = best;
    visited[static_cast<size_t>(best)] = 1;
    cur = best;
  }
  if (!inst.has_arc(cur, 0)) return std::nullopt;
  succ[static_cast<size_t>(cur)] = 0;
  return succ;
}

// Lagrangian charge on the active cuts, used as an extra pruning bound. Any
// nonnegative multipliers give a valid lower bound for the cut-constrained
// problem: min over degree-feasible selections of the charged costs minus
// sum(lambda * rhs). Multipliers are fitted once at the root by subgradient
// steps and then frozen, so the search trajectory itself never depends on
// them; they only discard nodes whose charged bound already meets the
// incumbent.
struct ChargedBound {
  bool enabled = false;
  std::vector<double> matrix;  // base costs plus charges, masks not applied
  double const_term = 0.0;     // sum(lambda * rhs)
};

ChargedBound fit_charged_bound(const Instance& inst, const RestrictedModel& model,
                               const std::vector<double>& base, double upper_bound) {
  ChargedBound out;
  if (model.num_cuts() == 0) return out;
  const int n = inst.n();

  // Active set of charged cuts, grown lazily from violations.
  std::vector<int> charged;                       // cut indices
  std::vector<double> lambda(static_cast<size_t>(model.num_cuts()), 0.0);
  std::vector<double> best_lambda = lambda;
  double best_value = -std::numeric_limits<double>::max();

  AssignmentSolver solver(n, masked_sentinel(n, base));
  std::vector<double> charged_matrix(base.size());
  std::vector<int> match;
  std::vector<int> inside(static_cast<size_t>(model.num_cuts()), 0);

  double theta = 2.0;
  int stall = 0;
  const int kMaxIters = 80;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    charged_matrix = base;
    double const_term = 0.0;
    for (int c : charged) {
      const double l = lambda[static_cast<size_t>(c)];
      if (l <= 0.0) continue;
      const SecCut& cut = model.cuts()[static_cast<size_t>(c)];
      const_term += l * cut.rhs();
      for (const Arc& a : inst.arcs()) {
        if (cut.contains(a.from) && cut.contains(a.to)) {
          double& cell = charged_matrix[static_cast<size_t>(a.from) * n + a.to];
          if (cell != kMaskedCost) cell += l;
        }
      }
    }

    AssignmentState state = solver.fresh_state();
    solver.solve(state, charged_matrix);
    double charged_objective = 0.0;
    if (!solver.extract(state, charged_matrix, match, charged_objective))
      return out;  // relaxation infeasible; leave the bound disabled
    const double value = charged_objective - const_term;
    if (value > best_value + 1e-9) {
      best_value = value;
      best_lambda = lambda;
      stall = 0;
    } else if (++stall >= 10) {
      theta *= 0.5;
      stall = 0;
    }

    // Subgradient g_S = arcs inside S - rhs over every active cut; violated
    // cuts enter the charged set on sight.
    std::fill(inside.begin(), inside.end(), 0);
    for (int c = 0; c < model.num_cuts(); ++c) {
      const SecCut& cut = model.cuts()[static_cast<size_t>(c)];
      int count = 0;
      for (int v : cut.members())
        if (cut.contains(match[static_cast<size_t>(v)])) ++count;
      inside[static_cast<size_t>(c)] = count;
    }
    double norm2 = 0.0;
    for (int c = 0; c < model.num_cuts(); ++c) {
      const double g = inside[static_cast<size_t>(c)] -
                       model.cuts()[static_cast<size_t>(c)].rhs();
      if (g > 0 && lambda[static_cast<size_t>(c)] == 0.0 &&
          std::find(charged.begin(), charged.end(), c) == charged.end())
        charged.push_back(c);
      if (lambda[static_cast<size_t>(c)] > 0.0 || g > 0) norm2 += g * g;
    }
    if (norm2 == 0.0) break;  // matching satisfies every cut: bound is exact
    const double gap = upper_bound - value;
    if (gap <= 1e-9) break;
    const double step = theta * gap / norm2;
    for (int c : charged) {
      const double g = inside[static_cast<size_t>(c)] -
                       model.cuts()[static_cast<size_t>(c)].rhs();
      lambda[static_cast<size_t>(c)] =
          std::max(0.0, lambda[static_cast<size_t>(c)] + step * g);
    }
  }

  out.enabled = true;
  out.matrix = base;
  out.const_term = 0.0;
  for (int c = 0; c < model.num_cuts(); ++c) {
    const double l = best_lambda[static_cast<size_t>(c)];
    if (l <= 0.0) continue;
    const SecCut& cut = model.cuts()[static_cast<size_t>(c)];
    out.const_term += l * cut.rhs();
    for (const Arc& a : inst.arcs()) {
      if (cut.contains(a.from) && cut.contains(a.to)) {
        double& cell = out.matrix[static_cast<size_t>(a.from) * n + a.to];
        if (cell != kMaskedCost) cell += l;
      }
    }
  }
  return out;
}

struct BnbNode {
  std::vector<int> forbidden;  // arc indices into instance.arcs()
  std::vector<int> required;
  AssignmentState state;         // parent duals/matching; repaired on visit
  AssignmentState charged_state; // same for the charged bound matrix
  bool fresh = false;
};

}  // namespace

ArcSolution hungarian_assignment(int n, std::span<const double> costs) {
  if (n < 1 || costs.size() != static_cast<size_t>(n) * n)
    throw OutOfRange("cost matrix must be square n*n");
  AssignmentSolver solver(n, masked_sentinel(n, costs));
  AssignmentState state = solver.fresh_state();
  solver.solve(state, costs);
  std::vector<int> match;
  double objective = 0.0;
  if (!solver.extract(state, costs, match, objective))
    throw Infeasible("no finite-cost perfect matching exists");
  return solution_from_permutation(n, match, objective);
}

ExactResult solve_restricted_exact(const RestrictedModel& model,
                                   const ExactOptions& opts) {
  const auto t0 = Clock::now();
  const Instance& inst = model.instance();
  const int n = inst.n();
  constexpr double kEps = 1e-9;

  // Active cuts checked smallest-first so branching picks the smallest
  // violated subset.
  std::vector<int> cut_order(static_cast<size_t>(model.num_cuts()));
  std::iota(cut_order.begin(), cut_order.end(), 0);
  std::sort(cut_order.begin(), cut_order.end(), [&](int a, int b) {
    const SecCut& ca = model.cuts()[static_cast<size_t>(a)];
    const SecCut& cb = model.cuts()[static_cast<size_t>(b)];
    if (ca.size() != cb.size()) return ca.size() < cb.size();
    return ca.members() < cb.members();
  });

  // A permutation violates S iff S is closed under the successor map.
  auto violated_cut = [&](const std::vector<int>& succ) -> const SecCut* {
    for (int idx : cut_order) {
      const SecCut& cut = model.cuts()[static_cast<size_t>(idx)];
      bool closed = true;
      for (int v : cut.members()) {
        if (!cut.contains(succ[static_cast<size_t>(v)])) {
          closed = false;
          break;
        }
      }
      if (closed) return &cut;
    }
    return nullptr;
  };

  std::optional<ArcSolution> incumbent;
  if (auto nn = nearest_neighbor_tour(inst)) {
    improve_tour_2opt(inst, *nn);
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += inst.cost(i, (*nn)[static_cast<size_t>(i)]);
    incumbent = solution_from_permutation(n, *nn, obj);
  }

  std::vector<double> base(static_cast<size_t>(n) * n, kMaskedCost);
  for (const Arc& a : inst.arcs())
    base[static_cast<size_t>(a.from) * n + a.to] = inst.cost(a.from, a.to);
  AssignmentSolver solver(n, masked_sentinel(n, base));

  // Tighten the root incumbent by patching the relaxation matching into a
  // tour; a Hamiltonian cycle satisfies every SEC, so it is always feasible.
  {
    AssignmentState root = solver.fresh_state();
    solver.solve(root, base);
    std::vector<int> match0;
    double obj0 = 0.0;
    if (solver.extract(root, base, match0, obj0)) {
      if (auto tour = patch_cycles(inst, match0)) {
        double obj = 0.0;
        for (int i = 0; i < n; ++i)
          obj += inst.cost(i, (*tour)[static_cast<size_t>(i)]);
        if (!incumbent || obj < incumbent->objective - kEps)
          incumbent = solution_from_permutation(n, *tour, obj);
      }
    }
  }

  const ChargedBound charged = fit_charged_bound(
      inst, model, base,
      incumbent ? incumbent->objective : n * inst.max_cost());

  std::vector<BnbNode> stack;
  stack.push_back({{}, {}, solver.fresh_state(), solver.fresh_state(), true});
  std::int64_t nodes = 0;
  bool exhausted = false;
  std::vector<double> masked(base.size());
  std::vector<double> masked_charged;
  std::vector<int> match;

  while (!stack.empty()) {
    if (opts.budget_s && seconds_since(t0) > *opts.budget_s) {
      exhausted = true;
      break;
    }
    if (opts.node_budget && nodes >= *opts.node_budget) {
      exhausted = true;
      break;
    }
    BnbNode node = std::move(stack.back());
    stack.pop_back();
    ++nodes;

    auto apply_masks = [&](std::vector<double>& m) {
      for (int f : node.forbidden)
        m[static_cast<size_t>(inst.arcs()[static_cast<size_t>(f)].from) * n +
          inst.arcs()[static_cast<size_t>(f)].to] = kMaskedCost;
      for (int r : node.required) {
        const Arc a = inst.arcs()[static_cast<size_t>(r)];
        for (int j = 0; j < n; ++j)
          if (j != a.to) m[static_cast<size_t>(a.from) * n + j] = kMaskedCost;
        for (int i = 0; i < n; ++i)
          if (i != a.from) m[static_cast<size_t>(i) * n + a.to] = kMaskedCost;
      }
    };

    if (charged.enabled && incumbent) {
      masked_charged = charged.matrix;
      apply_masks(masked_charged);
      if (node.fresh)
        solver.solve(node.charged_state, masked_charged);
      else
        solver.repair(node.charged_state, masked_charged);
      std::vector<int> cmatch;
      double charged_objective = 0.0;
      if (!solver.extract(node.charged_state, masked_charged, cmatch,
                          charged_objective))
        continue;
      if (charged_objective - charged.const_term >= incumbent->objective - kEps)
        continue;
    }

    masked = base;
    apply_masks(masked);

    if (node.fresh)
      solver.solve(node.state, masked);
    else
      solver.repair(node.state, masked);

    double objective = 0.0;
    if (!solver.extract(node.state, masked, match, objective)) continue;
    if (incumbent && objective >= incumbent->objective - kEps) continue;

    const std::vector<int>& succ = match;
    const SecCut* cut = violated_cut(succ);
    if (cut == nullptr) {
      incumbent = solution_from_permutation(n, succ, objective);
      continue;
    }

    // Selected arcs inside the violated subset, cheapest first; child t
    // forbids arc t and requires arcs 0..t-1 (mutually exclusive split).
    std::vector<int> branch_arcs;
    for (int v : cut->members()) {
      const int j = succ[static_cast<size_t>(v)];
      if (cut->contains(j)) branch_arcs.push_back(inst.arc_index(v, j));
    }
    std::sort(branch_arcs.begin(), branch_arcs.end(), [&](int a, int b) {
      const Arc aa = inst.arcs()[static_cast<size_t>(a)];
      const Arc ab = inst.arcs()[static_cast<size_t>(b)];
      const double ca = inst.cost(aa.from, aa.to), cb = inst.cost(ab.from, ab.to);
      return ca < cb || (ca == cb && a < b);
    });

    std::vector<BnbNode> children;
    for (size_t t = 0; t < branch_arcs.size(); ++t) {
      const int forbid = branch_arcs[t];
      if (std::find(node.required.begin(), node.required.end(), forbid) !=
          node.required.end())
        continue;  // would contradict a requirement: empty subproblem
      BnbNode child;
      child.forbidden = node.forbidden;
      child.forbidden.push_back(forbid);
      child.required = node.required;
      child.required.insert(child.required.end(), branch_arcs.begin(),
                            branch_arcs.begin() + static_cast<std::ptrdiff_t>(t));
      child.state = node.state;
      child.charged_state = node.charged_state;
      children.push_back(std::move(child));
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it)
      stack.push_back(std::move(*it));
  }

  if (!incumbent) {
    if (exhausted)
      throw Infeasible("budget exhausted before any feasible solution was found");
    throw Infeasible("no arc selection satisfies the degree constraints and cuts");
  }

  ExactResult result;
  result.solution = *incumbent;
  result.optimal = !exhausted;
  result.nodes_explored = nodes;
  result.wall_time_s = seconds_since(t0);
  return result;
}

ExactResult held_karp(const Instance& inst) {
  const auto t0 = Clock::now();
  const int n = inst.n();
  if (n > 18) throw TooLarge("held_karp guarded at n <= 18");

  const double kInf = std::numeric_limits<double>::max() / 4;
  auto arc_cost = [&](int i, int j) {
    return inst.has_arc(i, j) ? inst.cost(i, j) : kInf;
  };

  const size_t size = size_t{1} << n;
  std::vector<double> dp(size * static_cast<size_t>(n), kInf);
  std::vector<std::int8_t> parent(size * static_cast<size_t>(n), -1);
  dp[1 * static_cast<size_t>(n) + 0] = 0.0;

  for (std::uint32_t mask = 1; mask < size; ++mask) {
    if (!(mask & 1u)) continue;
    for (int j = 0; j < n; ++j) {
      if (!((mask >> j) & 1u)) continue;
      const double cur = dp[static_cast<size_t>(mask) * n + j];
      if (cur >= kInf) continue;
      for (int k = 1; k < n; ++k) {
        if ((mask >> k) & 1u) continue;
        const double step = arc_cost(j, k);
        if (step >= kInf) continue;
        const std::uint32_t next = mask | (1u << k);
        double& slot = dp[static_cast<size_t>(next) * n + k];
        if (cur + step < slot) {
          slot = cur + step;
          parent[static_cast<size_t>(next) * n + k] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  const std::uint32_t full = static_cast<std::uint32_t>(size - 1);
  double best = kInf;
  int best_end = -1;
  for (int j = 1; j < n; ++j) {
    const double cur = dp[static_cast<size_t>(full) * n + j];
    const double close = arc_cost(j, 0);
    if (cur >= kInf || close >= kInf) continue;
    if (cur + close < best) {
      best = cur + close;
      best_end = j;
    }
  }
  if (best_end < 0)
    throw Infeasible("no Hamiltonian cycle in the (reduced) arc set");

  std::vector<int> succ(static_cast<size_t>(n), -1);
  std::uint32_t mask = full;
  int v = best_end;
  succ[static_cast<size_t>(best_end)] = 0;
  while (v != 0) {
    const int prev = parent[static_cast<size_t>(mask) * n + v];
    succ[static_cast<size_t>(prev)] = v;
    mask &= ~(1u << v);
    v = prev;
  }

  ExactResult result;
  result.solution = solution_from_permutation(n, succ, best);
  result.optimal = true;
  result.nodes_explored = static_cast<std::int64_t>(size);
  result.wall_time_s = seconds_since(t0);
  return result;
}

ExactResult brute_force_tsp(const Instance& inst) {
  const auto t0 = Clock::now();
  const int n = inst.n();
  if (n > 10) throw TooLarge("brute_force_tsp guarded at n <= 10");

  const double kInf = std::numeric_limits<double>::max() / 4;
  auto arc_cost = [&](int i, int j) {
    return inst.has_arc(i, j) ? inst.cost(i, j) : kInf;
  };

  std::vector<int> perm(static_cast<size_t>(n) - 1);
  std::iota(perm.begin(), perm.end(), 1);
  double best = kInf;
  std::vector<int> best_perm;
  std::int64_t count = 0;
  do {
    ++count;
    double total = arc_cost(0, perm.front());
    for (size_t t = 0; t + 1 < perm.size() && total < kInf; ++t)
      total += arc_cost(perm[t], perm[t + 1]);
    if (total < kInf) total += arc_cost(perm.back(), 0);
    if (total < best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (best >= kInf)
    throw Infeasible("no Hamiltonian cycle in the (reduced) arc set");

  std::vector<int> succ(static_cast<size_t>(n), -1);
  succ[0] = best_perm.front();
  for (size_t t = 0; t + 1 < best_perm.size(); ++t)
    succ[static_cast<size_t>(best_perm[t])] = best_perm[t + 1];
  succ[static_cast<size_t>(best_perm.back())] = 0;

  ExactResult result;
  result.solution = solution_from_permutation(n, succ, best);
  result.optimal = true;
  result.nodes_explored = count;
  result.wall_time_s = seconds_since(t0);
  return result;
}

}  // namespace tspcut
