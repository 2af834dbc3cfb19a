#include <cmath>
#include <cstdint>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "tspcut/exact.hpp"
#include "tspcut/qubo.hpp"

using namespace tspcut;

namespace {

// Encodes a slack value into the clipped-binary bits of one cut, writing into
// the assignment vector at the cut's slack positions.
void encode_slack(const QuboProblem& qubo, int cut_index, int value,
                  std::vector<std::uint8_t>& x) {
  // Collect weights for this cut, highest bit last by construction.
  std::vector<std::pair<int, double>> bits;  // var index, weight
  for (int i = qubo.num_arc_vars(); i < qubo.num_vars(); ++i) {
    const VarTag& tag = qubo.var_tags()[static_cast<size_t>(i)];
    if (tag.kind == VarTag::Kind::slack && tag.cut_index == cut_index)
      bits.push_back({i, tag.slack_weight});
  }
  double remaining = value;
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
    if (it->second <= remaining) {
      x[static_cast<size_t>(it->first)] = 1;
      remaining -= it->second;
    }
  }
  REQUIRE(remaining == 0.0);
}

// Assignment for an arc selection with every cut slack set to its exact
// residual; only valid when each cut satisfies lhs <= rhs.
std::vector<std::uint8_t> encode_solution(const QuboProblem& qubo,
                                          const RestrictedModel& model,
                                          const std::vector<Arc>& selected) {
  std::vector<std::uint8_t> x(static_cast<size_t>(qubo.num_vars()), 0);
  for (const Arc& a : selected) {
    const int idx = model.instance().arc_index(a.from, a.to);
    REQUIRE(idx >= 0);
    x[static_cast<size_t>(idx)] = 1;
  }
  for (int c = 0; c < model.num_cuts(); ++c) {
    const SecCut& cut = model.cuts()[static_cast<size_t>(c)];
    int lhs = 0;
    for (const Arc& a : selected)
      if (cut.contains(a.from) && cut.contains(a.to)) ++lhs;
    REQUIRE(lhs <= cut.rhs());
    encode_slack(qubo, c, cut.rhs() - lhs, x);
  }
  return x;
}

std::vector<Arc> ring_tour(int n) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
  return arcs;
}

}  // namespace

TEST_CASE("feasible tours with exact slacks sit at energy == tour cost") {
  RestrictedModel model(tsptest::berlin_prefix(6));
  model.add_cut(SecCut({0, 1, 2}));
  model.add_cut(SecCut({1, 2, 3, 4}));
  QuboProblem qubo = to_qubo(model);

  const auto tour = ring_tour(6);
  double cost = 0.0;
  for (const Arc& a : tour) cost += model.instance().cost(a.from, a.to);

  auto x = encode_solution(qubo, model, tour);
  CHECK(qubo.energy(x) == doctest::Approx(cost).epsilon(1e-9));
}

TEST_CASE("a missing outgoing arc costs at least one penalty unit") {
  RestrictedModel model(tsptest::berlin_prefix(5));
  QuboProblem qubo = to_qubo(model);
  auto tour = ring_tour(5);
  auto x = encode_solution(qubo, model, tour);

  // Drop vertex 2's outgoing arc.
  const int idx = model.instance().arc_index(2, 3);
  x[static_cast<size_t>(idx)] = 0;
  double cost_part = 0.0;
  for (const Arc& a : tour)
    if (!(a.from == 2 && a.to == 3))
      cost_part += model.instance().cost(a.from, a.to);
  CHECK(qubo.energy(x) >= cost_part + qubo.penalty_weight() - 1e-6);
}

TEST_CASE("variable counts per the published table, no slacks without cuts") {
  QuboProblem full = to_qubo(RestrictedModel(tsptest::berlin_prefix(5)));
  CHECK(full.num_vars() == 20);
  CHECK(full.num_slack_vars() == 0);

  QuboProblem caf = to_qubo(RestrictedModel(tsptest::berlin_prefix_caf(5)));
  CHECK(caf.num_vars() == 18);
  CHECK(caf.num_arc_vars() == 18);
}

TEST_CASE("slack bit widths cover [0, rhs] exactly") {
  RestrictedModel model(tsptest::berlin_prefix(8));
  model.add_cut(SecCut({0, 1}));           // rhs 1 -> 1 bit
  model.add_cut(SecCut({0, 1, 2}));        // rhs 2 -> weights 1,1
  model.add_cut(SecCut({0, 1, 2, 3}));     // rhs 3 -> weights 1,2
  model.add_cut(SecCut({0, 1, 2, 3, 4}));  // rhs 4 -> weights 1,2,1
  QuboProblem qubo = to_qubo(model);

  std::vector<std::vector<double>> weights(4);
  for (int i = qubo.num_arc_vars(); i < qubo.num_vars(); ++i) {
    const VarTag& tag = qubo.var_tags()[static_cast<size_t>(i)];
    weights[static_cast<size_t>(tag.cut_index)].push_back(tag.slack_weight);
  }
  CHECK(weights[0] == std::vector<double>{1});
  CHECK(weights[1] == std::vector<double>{1, 1});
  CHECK(weights[2] == std::vector<double>{1, 2});
  CHECK(weights[3] == std::vector<double>{1, 2, 1});

  for (int c = 0; c < 4; ++c) {
    const int rhs = model.cuts()[static_cast<size_t>(c)].rhs();
    double total = 0.0;
    for (double w : weights[static_cast<size_t>(c)]) total += w;
    CHECK(total == rhs);  // top coefficient clipped: no overshoot
    for (int v = 0; v <= rhs; ++v) {
      std::vector<std::uint8_t> x(static_cast<size_t>(qubo.num_vars()), 0);
      encode_slack(qubo, c, v, x);  // REQUIREs representability
    }
  }
}

TEST_CASE("auto penalty dominates any single violation") {
  RestrictedModel model(tsptest::berlin_prefix(7));
  QuboProblem qubo = to_qubo(model);
  CHECK(qubo.penalty_weight() ==
        doctest::Approx(7 * model.instance().max_cost() + 1.0));
  QuboProblem custom = to_qubo(model, 12345.0);
  CHECK(custom.penalty_weight() == 12345.0);
}

TEST_CASE("read schedule: target, growth and cap") {
  ReadSchedule schedule;
  CHECK(schedule.num_reads_max() == 4651);
  CHECK(compute_num_reads(schedule, 0) == 1000);
  CHECK(compute_num_reads(schedule, 10) == 2000);
  CHECK(compute_num_reads(schedule, 50) == 4651);
  CHECK_THROWS_AS(compute_num_reads(schedule, -1), OutOfRange);
}

TEST_CASE("time accounting per the modeled solver decomposition") {
  ReadSchedule schedule;
  TimeBreakdown t = account_time(PhaseTimers{}, 1000, schedule);
  CHECK(t.solver_modeled_us == 215000);
  TimeBreakdown capped = account_time(PhaseTimers{}, 4651, schedule);
  CHECK(capped.solver_modeled_us == 1000965);
  CHECK(capped.solver_modeled_us <= 1000000 + 215);
  TimeBreakdown zero = account_time(PhaseTimers{}, 0, schedule);
  CHECK(zero.total_s == 0.0);
  TimeBreakdown sum = account_time(PhaseTimers{0.5, 0.25, 0.0, 0.125}, 0, schedule);
  CHECK(sum.total_s == doctest::Approx(0.875));
  CHECK(sum.total_s >= sum.build_s + sum.conversion_s + sum.decode_s);
  CHECK_THROWS_AS(account_time(PhaseTimers{-1, 0, 0, 0}, 0, schedule), OutOfRange);
}

TEST_CASE("single-variable raw QUBO anneals to its minimum on every read") {
  QuboProblem qubo = QuboProblem::raw({-1.0}, {}, 0.0, 1.0);
  SampleSet set = anneal(qubo, 25, 60, 9);
  CHECK(set.num_reads_used == 25);
  REQUIRE(set.samples.size() == 25);
  for (const Sample& s : set.samples) {
    CHECK(s.energy == doctest::Approx(-1.0));
    CHECK(s.assignment == std::vector<std::uint8_t>{1});
  }
}

TEST_CASE("cut-free anneal reaches the assignment optimum") {
  Instance inst = tsptest::berlin_prefix_caf(5);
  RestrictedModel model(inst);

  std::vector<double> costs(25, kMaskedCost);
  for (const Arc& a : inst.arcs())
    costs[static_cast<size_t>(a.from) * 5 + a.to] = inst.cost(a.from, a.to);
  const double relaxation = hungarian_assignment(5, costs).objective;

  QuboProblem qubo = to_qubo(model);
  SampleSet set = anneal(qubo, 1000, 2000, 42);
  REQUIRE(set.best_feasible.has_value());
  CHECK(set.best_feasible->objective == doctest::Approx(relaxation).epsilon(1e-9));
}

TEST_CASE("samples are sorted by energy and flagged consistently") {
  RestrictedModel model(tsptest::berlin_prefix_caf(6));
  QuboProblem qubo = to_qubo(model);
  SampleSet set = anneal(qubo, 64, 200, 3);
  for (size_t i = 1; i < set.samples.size(); ++i)
    CHECK(set.samples[i - 1].energy <= set.samples[i].energy);
  for (const Sample& s : set.samples) {
    auto [sol, feasible] = decode(qubo, s.assignment, model);
    CHECK(feasible == s.feasible);
  }
}

TEST_CASE("seeded determinism is bit-exact") {
  RestrictedModel model(tsptest::berlin_prefix_caf(6));
  QuboProblem qubo = to_qubo(model);
  SampleSet a = anneal(qubo, 200, 300, 123);
  SampleSet b = anneal(qubo, 200, 300, 123);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].assignment == b.samples[i].assignment);
    CHECK(a.samples[i].energy == b.samples[i].energy);
  }
  SampleSet c = anneal(qubo, 200, 300, 124);
  bool any_diff = false;
  for (size_t i = 0; i < a.samples.size(); ++i)
    any_diff |= a.samples[i].assignment != c.samples[i].assignment;
  CHECK(any_diff);
}

TEST_CASE("decode recovers tours, rejects the rest") {
  RestrictedModel model(tsptest::berlin_prefix(5));
  model.add_cut(SecCut({0, 1, 2}));
  QuboProblem qubo = to_qubo(model);

  auto x = encode_solution(qubo, model, ring_tour(5));
  auto [sol, feasible] = decode(qubo, x, model);
  CHECK(feasible);
  CHECK(sol.cycle_count == 1);

  std::vector<std::uint8_t> zeros(static_cast<size_t>(qubo.num_vars()), 0);
  CHECK_FALSE(decode(qubo, zeros, model).second);

  // Two cycles where one is the active cut: degree feasible, cut violated.
  std::vector<std::uint8_t> split(static_cast<size_t>(qubo.num_vars()), 0);
  for (const Arc& a : std::vector<Arc>{{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 3}})
    split[static_cast<size_t>(model.instance().arc_index(a.from, a.to))] = 1;
  auto [split_sol, split_feasible] = decode(qubo, split, model);
  CHECK(split_sol.degree_feasible);
  CHECK_FALSE(split_feasible);

  std::vector<std::uint8_t> wrong(3, 0);
  CHECK_THROWS_AS(decode(qubo, wrong, model), LengthMismatch);
  CHECK_THROWS_AS(qubo.energy(wrong), LengthMismatch);
}

TEST_CASE("exhaustive n=4: feasible minimum equals the exact optimum") {
  Instance inst = tsptest::berlin_prefix(4);
  RestrictedModel model(inst);
  for (SecCut& cut : enumerate_all_secs(4)) model.add_cut(std::move(cut));
  QuboProblem qubo = to_qubo(model);
  const double P = qubo.penalty_weight();
  const int arcs = qubo.num_arc_vars();

  const double exact = solve_restricted_exact(model).solution.objective;

  // Minimum energy over slack bits has a closed form: residual (lhs-rhs)+
  // per cut; verify it against qubo.energy on random slack assignments while
  // scanning every arc assignment.
  double best_feasible = std::numeric_limits<double>::max();
  double worst_feasible = 0.0;
  double min_violating = std::numeric_limits<double>::max();
  std::mt19937 rng(5);
  for (std::uint32_t word = 0; word < (1u << arcs); ++word) {
    double cost = 0.0;
    std::vector<int> out(4, 0), in(4, 0);
    for (int t = 0; t < arcs; ++t) {
      if (!((word >> t) & 1u)) continue;
      const Arc a = inst.arcs()[static_cast<size_t>(t)];
      cost += inst.cost(a.from, a.to);
      ++out[static_cast<size_t>(a.from)];
      ++in[static_cast<size_t>(a.to)];
    }
    double penalty = 0.0;
    bool feasible = true;
    for (int v = 0; v < 4; ++v) {
      penalty += P * (out[static_cast<size_t>(v)] - 1) * (out[static_cast<size_t>(v)] - 1);
      penalty += P * (in[static_cast<size_t>(v)] - 1) * (in[static_cast<size_t>(v)] - 1);
      feasible = feasible && out[static_cast<size_t>(v)] == 1 && in[static_cast<size_t>(v)] == 1;
    }
    for (const SecCut& cut : model.cuts()) {
      int lhs = 0;
      for (int t = 0; t < arcs; ++t) {
        if (!((word >> t) & 1u)) continue;
        const Arc a = inst.arcs()[static_cast<size_t>(t)];
        if (cut.contains(a.from) && cut.contains(a.to)) ++lhs;
      }
      const int over = lhs - cut.rhs();
      if (over > 0) {
        penalty += P * over * over;
        feasible = false;
      }
    }
    const double energy = cost + penalty;
    if (feasible) {
      best_feasible = std::min(best_feasible, energy);
      worst_feasible = std::max(worst_feasible, energy);
    } else {
      min_violating = std::min(min_violating, energy);
    }
  }
  CHECK(best_feasible == doctest::Approx(exact).epsilon(1e-9));
  CHECK(min_violating >= worst_feasible - 1e-9);  // penalty dominance
  CHECK(min_violating >= best_feasible + 1.0 - 1e-9);

  // Spot-check the closed form against assembled coefficients.
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint8_t> x(static_cast<size_t>(qubo.num_vars()), 0);
    for (int i = 0; i < qubo.num_vars(); ++i) x[static_cast<size_t>(i)] = rng() & 1u;
    double cost = 0.0;
    std::vector<int> out(4, 0), in(4, 0);
    for (int i = 0; i < arcs; ++i) {
      if (!x[static_cast<size_t>(i)]) continue;
      const Arc a = inst.arcs()[static_cast<size_t>(i)];
      cost += inst.cost(a.from, a.to);
      ++out[static_cast<size_t>(a.from)];
      ++in[static_cast<size_t>(a.to)];
    }
    double expected = cost;
    for (int v = 0; v < 4; ++v) {
      expected += P * (out[static_cast<size_t>(v)] - 1) * (out[static_cast<size_t>(v)] - 1);
      expected += P * (in[static_cast<size_t>(v)] - 1) * (in[static_cast<size_t>(v)] - 1);
    }
    for (int c = 0; c < model.num_cuts(); ++c) {
      const SecCut& cut = model.cuts()[static_cast<size_t>(c)];
      double lhs = 0;
      for (int i = 0; i < arcs; ++i) {
        if (!x[static_cast<size_t>(i)]) continue;
        const Arc a = inst.arcs()[static_cast<size_t>(i)];
        if (cut.contains(a.from) && cut.contains(a.to)) ++lhs;
      }
      for (int i = arcs; i < qubo.num_vars(); ++i) {
        const VarTag& tag = qubo.var_tags()[static_cast<size_t>(i)];
        if (tag.cut_index == c && x[static_cast<size_t>(i)]) lhs += tag.slack_weight;
      }
      expected += P * (lhs - cut.rhs()) * (lhs - cut.rhs());
    }
    CHECK(qubo.energy(x) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("export text is deterministic and self-describing") {
  RestrictedModel model(tsptest::berlin_prefix_caf(5));
  model.add_cut(SecCut({0, 1, 2}));
  QuboProblem qubo = to_qubo(model);
  const std::string a = qubo_export_text(qubo);
  const std::string b = qubo_export_text(qubo);
  CHECK(a == b);
  CHECK(a.find("# vars 20 arc 18 slack 2") != std::string::npos);
  CHECK(a.find("# var 0 arc ") != std::string::npos);
}
