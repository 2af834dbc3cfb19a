#include "tspcut/cpa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace tspcut {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Distinct per-iteration seed stream, separate from the per-read stream.
std::uint64_t iteration_seed(std::uint64_t base, int iteration) {
  return splitmix64(splitmix64(base) + static_cast<std::uint64_t>(iteration));
}

struct IterationSolve {
  std::optional<ArcSolution> solution;  // empty: no feasible sample
  ArcSolution best_infeasible;          // diagnostic when empty
  int num_reads = 0;
  TimeBreakdown time;
  double wall_solve_s = 0.0;
  bool proven_optimal = false;
};

IterationSolve solve_exact_iteration(const RestrictedModel& model,
                                     const CpaConfig& cfg) {
  IterationSolve out;
  const auto t0 = Clock::now();
  ExactResult res = solve_restricted_exact(
      model, ExactOptions{cfg.per_iteration_budget_s, std::nullopt});
  out.solution = res.solution;
  out.proven_optimal = res.optimal;
  out.wall_solve_s = seconds_since(t0);
  out.time = account_time(PhaseTimers{}, 0, cfg.read_schedule);
  return out;
}

IterationSolve solve_anneal_iteration(const RestrictedModel& model,
                                      const CpaConfig& cfg, int cuts_so_far,
                                      std::uint64_t seed) {
  IterationSolve out;
  const int reads = compute_num_reads(cfg.read_schedule, cuts_so_far);
  const auto t_conv = Clock::now();
  const QuboProblem qubo = to_qubo(model);
  const double conversion_s = seconds_since(t_conv);
  const auto t_solve = Clock::now();
  SampleSet set = anneal(qubo, reads, cfg.sweeps, seed);
  out.wall_solve_s = seconds_since(t_solve);
  const auto t_dec = Clock::now();
  if (set.best_feasible) {
    out.solution = *set.best_feasible;
  } else if (!set.samples.empty()) {
    out.best_infeasible = decode(qubo, set.samples.front().assignment, model).first;
  }
  const double decode_s = seconds_since(t_dec);
  out.num_reads = set.num_reads_used;
  // The solver wall time is represented by the modeled QPU term; only the
  // conversion and decoding phases are measured here.
  out.time = account_time(PhaseTimers{0.0, conversion_s, 0.0, decode_s},
                          set.num_reads_used, cfg.read_schedule);
  return out;
}

// Emulated hybrid solver: a deterministically budgeted classical search
// (branch-and-bound on the restricted model) alongside a small batch of
// annealing reads; the better feasible candidate wins. The per-iteration
// time budget maps to a fixed node budget so traces stay reproducible.
IterationSolve solve_hybrid_iteration(const RestrictedModel& model,
                                      const CpaConfig& cfg, int cuts_so_far,
                                      std::uint64_t seed) {
  IterationSolve out;
  const double budget_s = cfg.per_iteration_budget_s.value_or(5.0);
  const std::int64_t node_budget =
      std::max<std::int64_t>(1000, std::llround(budget_s * 40000.0));

  const int reads = std::min(compute_num_reads(cfg.read_schedule, cuts_so_far), 128);
  const int sweeps = std::min(cfg.sweeps, 500);

  const auto t_conv = Clock::now();
  const QuboProblem qubo = to_qubo(model);
  const double conversion_s = seconds_since(t_conv);
  const auto t_solve = Clock::now();
  SampleSet set = anneal(qubo, reads, sweeps, seed);

  std::optional<ArcSolution> best = set.best_feasible;
  try {
    ExactResult classical = solve_restricted_exact(
        model, ExactOptions{std::nullopt, node_budget});
    if (!best || classical.solution.objective < best->objective - 1e-9)
      best = classical.solution;
  } catch (const Infeasible&) {
    // classical module found nothing within its budget; keep the samples
  }
  out.wall_solve_s = seconds_since(t_solve);

  if (best) {
    out.solution = *best;
  } else if (!set.samples.empty()) {
    out.best_infeasible = decode(qubo, set.samples.front().assignment, model).first;
  }
  out.num_reads = set.num_reads_used;
  out.time = account_time(PhaseTimers{0.0, conversion_s, 0.0, 0.0},
                          set.num_reads_used, cfg.read_schedule);
  return out;
}

IterationSolve solve_iteration(const RestrictedModel& model, const CpaConfig& cfg,
                               int cuts_so_far, int iteration) {
  const std::uint64_t seed = iteration_seed(cfg.seed, iteration);
  switch (cfg.backend) {
    case Backend::exact:
      return solve_exact_iteration(model, cfg);
    case Backend::anneal:
      return solve_anneal_iteration(model, cfg, cuts_so_far, seed);
    case Backend::hybrid_emulation:
      return solve_hybrid_iteration(model, cfg, cuts_so_far, seed);
  }
  throw Error("unknown backend");
}

}  // namespace

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::exact: return "exact";
    case Backend::anneal: return "anneal";
    case Backend::hybrid_emulation: return "hybrid_emulation";
  }
  return "?";
}

std::string to_string(CpaOutcome outcome) {
  switch (outcome) {
    case CpaOutcome::optimal: return "optimal";
    case CpaOutcome::feasible_tour: return "feasible_tour";
    case CpaOutcome::no_feasible: return "no_feasible";
    case CpaOutcome::iteration_limit: return "iteration_limit";
  }
  return "?";
}

double CpaTrace::objective() const {
  if (iterations.empty()) throw Error("trace has no iterations");
  return iterations.back().solution.objective;
}

std::vector<std::vector<int>> detect_subtours(const ArcSolution& solution, int n) {
  if (!solution.degree_feasible)
    throw NotDegreeFeasible("subtour detection expects a permutation solution");
  std::vector<int> succ(static_cast<size_t>(n), -1);
  for (const Arc& a : solution.selected) succ[static_cast<size_t>(a.from)] = a.to;

  std::vector<std::vector<int>> components;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<size_t>(s)]) continue;
    std::vector<int> cyc;
    for (int v = s; !seen[static_cast<size_t>(v)]; v = succ[static_cast<size_t>(v)]) {
      seen[static_cast<size_t>(v)] = 1;
      cyc.push_back(v);
    }
    std::sort(cyc.begin(), cyc.end());
    components.push_back(std::move(cyc));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

std::vector<SecCut> cuts_from_subtours(const std::vector<std::vector<int>>& subtours,
                                       int n) {
  std::vector<SecCut> cuts;
  for (const auto& s : subtours) {
    if (static_cast<int>(s.size()) >= n) continue;  // full tour: nothing to cut
    cuts.emplace_back(s);
  }
  return cuts;
}

std::vector<SecCut> cuts_from_subtours(const std::vector<std::vector<int>>& subtours,
                                       int n, const RestrictedModel& existing) {
  std::vector<SecCut> cuts;
  for (SecCut& cut : cuts_from_subtours(subtours, n)) {
    if (!existing.has_cut_subset(cut.mask())) cuts.push_back(std::move(cut));
  }
  return cuts;
}

CpaTrace run_cpa(const Instance& instance, const CpaConfig& cfg) {
  const int n = instance.n();
  const int max_iterations =
      cfg.max_iterations > 0 ? cfg.max_iterations : (n + 1) / 2;

  RestrictedModel model(instance);
  CpaTrace trace;
  trace.n = n;
  trace.backend = cfg.backend;
  trace.seed = cfg.seed;

  bool all_proven = true;
  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    IterationSolve step = solve_iteration(model, cfg, trace.total_cuts, iteration);

    CpaIteration record;
    record.num_reads = step.num_reads;
    record.time = step.time;
    record.wall_solve_s = step.wall_solve_s;

    if (!step.solution) {
      record.solution = step.best_infeasible;
      trace.iterations.push_back(std::move(record));
      trace.outcome = CpaOutcome::no_feasible;
      return trace;
    }
    record.solution = *step.solution;
    if (cfg.backend == Backend::exact) all_proven = all_proven && step.proven_optimal;

    const auto subtours = detect_subtours(record.solution, n);
    if (subtours.size() == 1) {
      trace.iterations.push_back(std::move(record));
      trace.outcome = (cfg.backend == Backend::exact && all_proven)
                          ? CpaOutcome::optimal
                          : CpaOutcome::feasible_tour;
      return trace;
    }

    record.cuts_added = cuts_from_subtours(subtours, n, model);
    for (const SecCut& cut : record.cuts_added) model.add_cut(cut);
    trace.total_cuts += static_cast<int>(record.cuts_added.size());
    trace.iterations.push_back(std::move(record));
  }
  trace.outcome = CpaOutcome::iteration_limit;
  return trace;
}

CpaTrace run_cilp(const Instance& instance, const CpaConfig& cfg) {
  const int n = instance.n();
  std::vector<SecCut> all_secs = enumerate_all_secs(n);  // throws TooLarge

  RestrictedModel model(instance);
  for (SecCut& cut : all_secs) model.add_cut(std::move(cut));

  CpaTrace trace;
  trace.n = n;
  trace.backend = cfg.backend;
  trace.seed = cfg.seed;
  trace.total_cuts = model.num_cuts();

  int cuts_for_reads = 0;
  if (cfg.backend != Backend::exact) {
    if (cfg.cilp_cuts_max) {
      cuts_for_reads = *cfg.cilp_cuts_max;
    } else {
      CpaConfig probe = cfg;
      probe.backend = Backend::exact;
      cuts_for_reads = run_cpa(instance, probe).total_cuts;
    }
  }

  IterationSolve step = solve_iteration(model, cfg, cuts_for_reads, 0);
  CpaIteration record;
  record.num_reads = step.num_reads;
  record.time = step.time;
  record.wall_solve_s = step.wall_solve_s;
  if (!step.solution) {
    record.solution = step.best_infeasible;
    trace.iterations.push_back(std::move(record));
    trace.outcome = CpaOutcome::no_feasible;
    return trace;
  }
  record.solution = *step.solution;
  trace.iterations.push_back(std::move(record));
  trace.outcome = (cfg.backend == Backend::exact && step.proven_optimal)
                      ? CpaOutcome::optimal
                      : CpaOutcome::feasible_tour;
  return trace;
}

GapStats gap_and_feasibility(const std::vector<CpaTrace>& runs, double optimum) {
  if (optimum <= 0) throw OutOfRange("optimum must be positive");
  GapStats stats;
  double gap_sum = 0.0;
  int feasible = 0;
  for (const CpaTrace& run : runs) {
    if (run.found_tour()) {
      const double gap = (run.objective() - optimum) / optimum * 100.0;
      stats.per_run_gap_pct.push_back(gap);
      gap_sum += gap;
      ++feasible;
    } else {
      stats.per_run_gap_pct.push_back(std::nullopt);
    }
  }
  if (feasible > 0) stats.gap_avg_pct = gap_sum / feasible;
  if (!runs.empty())
    stats.feas_pct = 100.0 * feasible / static_cast<double>(runs.size());
  return stats;
}

nlohmann::json trace_to_json(const CpaTrace& trace, bool include_wall_clock) {
  nlohmann::json j;
  j["n"] = trace.n;
  j["backend"] = to_string(trace.backend);
  j["seed"] = trace.seed;
  j["outcome"] = to_string(trace.outcome);
  j["total_cuts"] = trace.total_cuts;
  if (trace.found_tour())
    j["objective"] = trace.objective();
  else
    j["objective"] = nullptr;

  nlohmann::json iterations = nlohmann::json::array();
  for (const CpaIteration& it : trace.iterations) {
    nlohmann::json ji;
    ji["objective"] = it.solution.objective;
    ji["degree_feasible"] = it.solution.degree_feasible;
    ji["cycle_count"] = it.solution.cycle_count;
    nlohmann::json cuts = nlohmann::json::array();
    for (const SecCut& cut : it.cuts_added) {
      nlohmann::json members = nlohmann::json::array();
      for (int v : cut.members()) members.push_back(v + 1);  // 1-based ids
      cuts.push_back(members);
    }
    ji["cuts_added"] = cuts;
    ji["num_reads"] = it.num_reads;
    ji["solver_modeled_us"] = it.time.solver_modeled_us;
    ji["overhead_s"] = it.time.overhead_s;
    if (include_wall_clock) {
      ji["wall"] = {{"build_s", it.time.build_s},
                    {"conversion_s", it.time.conversion_s},
                    {"decode_s", it.time.decode_s},
                    {"solve_s", it.wall_solve_s},
                    {"total_s", it.time.total_s}};
    }
    iterations.push_back(std::move(ji));
  }
  j["iterations"] = std::move(iterations);
  return j;
}

}  // namespace tspcut
