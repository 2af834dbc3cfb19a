#ifndef TSPCUT_CPA_HPP
#define TSPCUT_CPA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tspcut/exact.hpp"
#include "tspcut/model.hpp"
#include "tspcut/qubo.hpp"

namespace tspcut {

enum class Backend { exact, anneal, hybrid_emulation };

enum class CpaOutcome { optimal, feasible_tour, no_feasible, iteration_limit };

std::string to_string(Backend backend);
std::string to_string(CpaOutcome outcome);

struct CpaConfig {
  Backend backend = Backend::exact;
  /// 0 selects the default cap ceil(n/2): the relaxation cannot contain more
  /// disjoint subtours than that.
  int max_iterations = 0;
  /// Per-iteration solver budget. Defaults to none for exact/anneal and to
  /// 5 seconds for hybrid emulation.
  std::optional<double> per_iteration_budget_s;
  ReadSchedule read_schedule;
  std::uint64_t seed = 0;
  int sweeps = 2000;
  /// CILP read rule input |C|_max; when unset run_cilp derives it from an
  /// exact CPA run on the same instance.
  std::optional<int> cilp_cuts_max;
};

struct CpaIteration {
  ArcSolution solution;
  std::vector<SecCut> cuts_added;
  int num_reads = 0;
  TimeBreakdown time;
  double wall_solve_s = 0.0;  // measured around the backend call
};

struct CpaTrace {
  int n = 0;
  Backend backend = Backend::exact;
  std::uint64_t seed = 0;
  std::vector<CpaIteration> iterations;
  int total_cuts = 0;
  CpaOutcome outcome = CpaOutcome::no_feasible;

  bool found_tour() const {
    return outcome == CpaOutcome::optimal || outcome == CpaOutcome::feasible_tour;
  }
  /// Objective of the final iteration's solution.
  double objective() const;
};

/// Vertex sets of the directed cycles of a degree-feasible selection, each
/// sorted ascending, ordered by smallest member. Their disjoint union is V.
std::vector<std::vector<int>> detect_subtours(const ArcSolution& solution, int n);

/// One SEC per detected component with |S| <= n-1; a component equal to V is
/// skipped. The overload with a model also drops subsets already active.
std::vector<SecCut> cuts_from_subtours(const std::vector<std::vector<int>>& subtours,
                                       int n);
std::vector<SecCut> cuts_from_subtours(const std::vector<std::vector<int>>& subtours,
                                       int n, const RestrictedModel& existing);

/// Algorithm: start from the cut-free restricted model, solve with the
/// configured backend, add SECs for all detected subtours, repeat until a
/// single Hamiltonian cycle remains or the iteration cap is hit. The anneal
/// backend uses compute_num_reads with the cuts added so far and keeps the
/// best feasible sample; an iteration without one ends the run as
/// no_feasible.
CpaTrace run_cpa(const Instance& instance, const CpaConfig& cfg);

/// Single-shot solve with every SEC enumerated up front (guarded by the
/// enumeration limit n <= 22). Anneal mode applies the CILP read rule.
CpaTrace run_cilp(const Instance& instance, const CpaConfig& cfg);

struct GapStats {
  std::vector<std::optional<double>> per_run_gap_pct;  // none for infeasible runs
  std::optional<double> gap_avg_pct;                   // none when feas = 0
  double feas_pct = 0.0;
};

/// GAP averaged over feasible runs only; feasibility share over all runs.
GapStats gap_and_feasibility(const std::vector<CpaTrace>& runs, double optimum);

/// Canonical JSON trace. Deterministic for a given seed; wall-clock phase
/// timings are included only on request since they vary between runs.
nlohmann::json trace_to_json(const CpaTrace& trace, bool include_wall_clock = false);

}  // namespace tspcut

#endif  // TSPCUT_CPA_HPP
