#include <cmath>
#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "tspcut/cpa.hpp"

using namespace tspcut;

namespace {

ArcSolution permutation_solution(const RestrictedModel& model,
                                 const std::vector<int>& succ) {
  std::vector<Arc> arcs;
  for (int i = 0; i < static_cast<int>(succ.size()); ++i)
    arcs.push_back({i, succ[static_cast<size_t>(i)]});
  return evaluate(model, arcs);
}

}  // namespace

TEST_CASE("detect_subtours on a single tour and on split cycles") {
  RestrictedModel model(tsptest::berlin_prefix(5));
  ArcSolution tour = permutation_solution(model, {1, 2, 3, 4, 0});
  auto one = detect_subtours(tour, 5);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == std::vector<int>{0, 1, 2, 3, 4});

  ArcSolution split = permutation_solution(model, {1, 2, 0, 4, 3});
  auto two = detect_subtours(split, 5);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == std::vector<int>{0, 1, 2});
  CHECK(two[1] == std::vector<int>{3, 4});
}

TEST_CASE("detect_subtours partitions the vertex set") {
  RestrictedModel model(tsptest::berlin_prefix(9));
  // three cycles: (0 1 2)(3 4 5)(6 7 8)
  ArcSolution sol = permutation_solution(model, {1, 2, 0, 4, 5, 3, 7, 8, 6});
  auto subtours = detect_subtours(sol, 9);
  REQUIRE(subtours.size() == 3);
  std::set<int> all;
  for (const auto& s : subtours)
    for (int v : s) CHECK(all.insert(v).second);
  CHECK(all.size() == 9);
}

TEST_CASE("detect_subtours rejects degree-infeasible input") {
  RestrictedModel model(tsptest::berlin_prefix(5));
  ArcSolution bad = evaluate(model, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(detect_subtours(bad, 5), NotDegreeFeasible);
}

TEST_CASE("cuts_from_subtours: rhs, full-tour skip, dedup") {
  auto cuts = cuts_from_subtours({{0, 1, 2}, {3, 4}}, 5);
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0].rhs() == 2);
  CHECK(cuts[1].rhs() == 1);

  CHECK(cuts_from_subtours({{0, 1, 2, 3, 4}}, 5).empty());

  RestrictedModel model(tsptest::berlin_prefix(5));
  model.add_cut(SecCut({0, 1, 2}));
  auto fresh = cuts_from_subtours({{0, 1, 2}, {3, 4}}, 5, model);
  REQUIRE(fresh.size() == 1);
  CHECK(fresh[0].members() == std::vector<int>{3, 4});
}

TEST_CASE("exact CPA reproduces published optima") {
  CpaConfig cfg;
  CpaTrace caf12 = run_cpa(tsptest::berlin_prefix_caf(12), cfg);
  CHECK(caf12.outcome == CpaOutcome::optimal);
  CHECK(std::abs(caf12.objective() - 4056.68) < 0.01);

  CpaTrace caf20 = run_cpa(tsptest::berlin_prefix_caf(20), cfg);
  CHECK(std::abs(caf20.objective() - 5270.86) < 0.01);

  CpaTrace full5 = run_cpa(tsptest::berlin_prefix(5), cfg);
  CHECK(std::abs(full5.objective() - 2314.55) < 0.01);
  // Trajectory-dependent: the published table implies 4 cuts at n=5.
  CHECK(full5.total_cuts >= 2);
  CHECK(full5.total_cuts <= 6);
}

TEST_CASE("exact CPA iterations always add fresh cuts until done") {
  CpaConfig cfg;
  CpaTrace trace = run_cpa(tsptest::berlin_prefix(15), cfg);
  REQUIRE(trace.outcome == CpaOutcome::optimal);
  std::set<std::uint64_t> seen;
  for (size_t i = 0; i < trace.iterations.size(); ++i) {
    const auto& it = trace.iterations[i];
    if (i + 1 < trace.iterations.size()) {
      CHECK(it.cuts_added.size() >= 2);  // >= 2 subtours means >= 2 cuts
      for (const SecCut& cut : it.cuts_added) CHECK(seen.insert(cut.mask()).second);
    } else {
      CHECK(it.cuts_added.empty());
      CHECK(it.solution.cycle_count == 1);
    }
  }
  int total = 0;
  for (const auto& it : trace.iterations) total += static_cast<int>(it.cuts_added.size());
  CHECK(total == trace.total_cuts);
}

TEST_CASE("iteration cap reports iteration_limit") {
  CpaConfig cfg;
  cfg.max_iterations = 1;
  CpaTrace trace = run_cpa(tsptest::berlin_prefix(10), cfg);
  CHECK(trace.outcome == CpaOutcome::iteration_limit);
  CHECK(trace.iterations.size() == 1);
}

TEST_CASE("CPA and CILP agree on the objective (exact)") {
  CpaConfig cfg;
  for (int n : {5, 7, 9, 10}) {
    for (bool caf : {false, true}) {
      Instance inst = caf ? tsptest::berlin_prefix_caf(n) : tsptest::berlin_prefix(n);
      const double via_cpa = run_cpa(inst, cfg).objective();
      const double via_cilp = run_cilp(inst, cfg).objective();
      CHECK(std::abs(via_cpa - via_cilp) < 1e-6);
    }
  }
}

TEST_CASE("run_cilp guards the enumeration") {
  CpaConfig cfg;
  CHECK_THROWS_AS(run_cilp(tsptest::berlin_prefix(23), cfg), TooLarge);
}

TEST_CASE("run_cilp exact hits the published cells") {
  CpaConfig cfg;
  CpaTrace n5 = run_cilp(tsptest::berlin_prefix(5), cfg);
  CHECK(std::abs(n5.objective() - 2314.55) < 0.01);
  CHECK(n5.total_cuts == 25);
  CpaTrace n8 = run_cilp(tsptest::berlin_prefix_caf(8), cfg);
  CHECK(std::abs(n8.objective() - 2550.94) < 0.01);
}

TEST_CASE("CAF never lets the objective drop below the complete optimum") {
  CpaConfig cfg;
  for (int n : {6, 9, 14}) {
    const double full = run_cpa(tsptest::berlin_prefix(n), cfg).objective();
    const double caf = run_cpa(tsptest::berlin_prefix_caf(n), cfg).objective();
    CHECK(caf >= full - 1e-9);
  }
}

TEST_CASE("anneal CPA finds a tour at n=5 and reports reads") {
  CpaConfig cfg;
  cfg.backend = Backend::anneal;
  cfg.seed = 1;
  cfg.sweeps = 800;
  CpaTrace trace = run_cpa(tsptest::berlin_prefix_caf(5), cfg);
  REQUIRE(trace.found_tour());
  CHECK(trace.outcome == CpaOutcome::feasible_tour);
  CHECK(trace.iterations.front().num_reads == 1000);
  for (size_t i = 1; i < trace.iterations.size(); ++i) {
    int cuts_before = 0;
    for (size_t j = 0; j < i; ++j)
      cuts_before += static_cast<int>(trace.iterations[j].cuts_added.size());
    CHECK(trace.iterations[i].num_reads == 1000 + 100 * cuts_before);
  }
  // Modeled solver time follows the read count.
  for (const auto& it : trace.iterations)
    CHECK(it.time.solver_modeled_us == static_cast<std::int64_t>(it.num_reads) * 215);
}

TEST_CASE("gap_and_feasibility aggregates per the table conventions") {
  CpaConfig cfg;
  CpaTrace good = run_cpa(tsptest::berlin_prefix(5), cfg);

  std::vector<CpaTrace> all_good(5, good);
  GapStats s1 = gap_and_feasibility(all_good, good.objective());
  CHECK(s1.feas_pct == 100.0);
  REQUIRE(s1.gap_avg_pct.has_value());
  CHECK(*s1.gap_avg_pct == doctest::Approx(0.0));

  CpaTrace failed = good;
  failed.outcome = CpaOutcome::no_feasible;
  std::vector<CpaTrace> mixed = {good, failed, failed, good, failed};
  GapStats s2 = gap_and_feasibility(mixed, good.objective());
  CHECK(s2.feas_pct == doctest::Approx(40.0));
  CHECK(*s2.gap_avg_pct == doctest::Approx(0.0));
  CHECK_FALSE(s2.per_run_gap_pct[1].has_value());

  std::vector<CpaTrace> none = {failed, failed};
  GapStats s3 = gap_and_feasibility(none, good.objective());
  CHECK(s3.feas_pct == 0.0);
  CHECK_FALSE(s3.gap_avg_pct.has_value());

  CHECK_THROWS_AS(gap_and_feasibility(all_good, 0.0), OutOfRange);
}

TEST_CASE("trace JSON is canonical and seed-reproducible") {
  CpaConfig cfg;
  cfg.backend = Backend::anneal;
  cfg.seed = 7;
  cfg.sweeps = 300;
  Instance inst = tsptest::berlin_prefix_caf(6);
  const std::string a = trace_to_json(run_cpa(inst, cfg), false).dump();
  const std::string b = trace_to_json(run_cpa(inst, cfg), false).dump();
  CHECK(a == b);
  CHECK(a.find("\"backend\":\"anneal\"") != std::string::npos);
  CHECK(a.find("\"cuts_added\"") != std::string::npos);
  CHECK(a.find("build_s") == std::string::npos);  // wall block off by default

  const std::string with_wall = trace_to_json(run_cpa(inst, cfg), true).dump();
  CHECK(with_wall.find("build_s") != std::string::npos);
}

TEST_CASE("hybrid emulation solves mid-size instances deterministically") {
  CpaConfig cfg;
  cfg.backend = Backend::hybrid_emulation;
  cfg.seed = 11;
  Instance inst = tsptest::berlin_prefix_caf(12);
  CpaTrace a = run_cpa(inst, cfg);
  REQUIRE(a.found_tour());
  CHECK(a.outcome == CpaOutcome::feasible_tour);
  CHECK(std::abs(a.objective() - 4056.68) < 0.01);
  CpaTrace b = run_cpa(inst, cfg);
  CHECK(trace_to_json(a, false).dump() == trace_to_json(b, false).dump());
}

TEST_CASE("cut vertex lists serialize 1-based") {
  CpaConfig cfg;
  CpaTrace trace = run_cpa(tsptest::berlin_prefix(5), cfg);
  nlohmann::json j = trace_to_json(trace, false);
  bool found = false;
  for (const auto& it : j["iterations"]) {
    for (const auto& cut : it["cuts_added"]) {
      for (const auto& v : cut) {
        CHECK(v.get<int>() >= 1);
        CHECK(v.get<int>() <= 5);
        found = true;
      }
    }
  }
  CHECK(found);
}
