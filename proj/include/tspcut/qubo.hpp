#ifndef TSPCUT_QUBO_HPP
#define TSPCUT_QUBO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tspcut/model.hpp"

namespace tspcut {

/// What a QUBO variable stands for: an arc decision or one bit of a cut's
/// slack expansion.
struct VarTag {
  enum class Kind { arc, slack };
  Kind kind = Kind::arc;
  Arc arc{};          // valid when kind == arc
  int cut_index = -1; // valid when kind == slack
  int bit = -1;
  double slack_weight = 0.0;
};

/// Upper-triangular quadratic model: energy(x) = offset + sum_i linear[i] x_i
/// + sum_{i<j} quadratic[(i,j)] x_i x_j. Arc variables come first, in
/// instance arc order, followed by slack bits in cut order.
class QuboProblem {
public:
  int num_vars() const { return static_cast<int>(linear_.size()); }
  int num_arc_vars() const { return num_arc_vars_; }
  int num_slack_vars() const { return num_vars() - num_arc_vars_; }

  const std::vector<VarTag>& var_tags() const { return tags_; }
  const std::vector<double>& linear() const { return linear_; }
  /// Sorted by (i, j) with i < j; coefficients merged.
  const std::vector<std::pair<std::pair<int, int>, double>>& quadratic() const {
    return quadratic_;
  }
  double offset() const { return offset_; }
  double penalty_weight() const { return penalty_; }

  /// The penalized model; present unless this is a raw QUBO.
  const RestrictedModel& model() const;
  bool has_model() const { return model_.has_value(); }

  double energy(std::span<const std::uint8_t> assignment) const;

  /// Assembles a QUBO directly from coefficients (test and tooling surface;
  /// no decoding possible).
  static QuboProblem raw(std::vector<double> linear,
                         std::vector<std::pair<std::pair<int, int>, double>> quadratic,
                         double offset, double penalty_weight);

private:
  friend QuboProblem to_qubo(const RestrictedModel&, std::optional<double>);
  QuboProblem() = default;

  std::optional<RestrictedModel> model_;
  std::vector<VarTag> tags_;
  std::vector<double> linear_;
  std::vector<std::pair<std::pair<int, int>, double>> quadratic_;
  double offset_ = 0.0;
  double penalty_ = 0.0;
  int num_arc_vars_ = 0;
};

/// Penalized QUBO of the restricted model: squared residuals of the degree
/// equalities plus slack-encoded SEC inequalities, all weighted by P. Slack
/// integers use a binary expansion whose top coefficient is clipped so the
/// range [0, |S|-1] is covered exactly. Auto penalty is P = n * c_max + 1.
QuboProblem to_qubo(const RestrictedModel& model,
                    std::optional<double> penalty = std::nullopt);

/// QPU read scheduling constants.
struct ReadSchedule {
  int n_start = 1000;
  int per_cut = 100;
  int annealing_time_us = 100;
  int readout_time_us = 115;
  std::int64_t t_max_us = 1'000'000;

  int num_reads_max() const {
    return static_cast<int>(t_max_us / (annealing_time_us + readout_time_us));
  }
};

/// min(n_start + per_cut * cuts, num_reads_max). In CPA mode `cuts` is the
/// number of SECs added across all previous iterations; in CILP mode it is
/// the maximum observed during a prior CPA run.
int compute_num_reads(const ReadSchedule& schedule, std::int64_t cuts);

struct PhaseTimers {
  double build_s = 0.0;
  double conversion_s = 0.0;
  double overhead_s = 0.0;  // simulated, 0 by default
  double decode_s = 0.0;
};

struct TimeBreakdown {
  double build_s = 0.0;
  double conversion_s = 0.0;
  double overhead_s = 0.0;
  std::int64_t solver_modeled_us = 0;
  double decode_s = 0.0;
  double total_s = 0.0;
};

TimeBreakdown account_time(const PhaseTimers& phases, int num_reads,
                           const ReadSchedule& schedule);

struct Sample {
  std::vector<std::uint8_t> assignment;
  double energy = 0.0;
  bool feasible = false;
};

struct SampleSet {
  std::vector<Sample> samples;  // ascending energy
  std::optional<ArcSolution> best_feasible;
  int num_reads_used = 0;
};

/// num_reads independent restarts of a seeded Metropolis annealer, each
/// running `sweeps` full single-flip passes under a geometric schedule from
/// T0 = P down to 1e-3 * mean|linear|. Per-read RNG streams derive from
/// (seed, read index), so results are identical regardless of thread count.
SampleSet anneal(const QuboProblem& qubo, int num_reads, int sweeps,
                 std::uint64_t seed);

/// Maps a QUBO assignment back to an arc selection: arc bits kept, slacks
/// dropped, degree constraints and active cuts checked.
std::pair<ArcSolution, bool> decode(const QuboProblem& qubo,
                                    std::span<const std::uint8_t> assignment,
                                    const RestrictedModel& model);

/// Plain-text export, bit-exact and deterministic: `i j coeff` per term
/// (diagonal lines carry linear coefficients), header comments record the
/// variable registry, offset and penalty.
std::string qubo_export_text(const QuboProblem& qubo);

}  // namespace tspcut

#endif  // TSPCUT_QUBO_HPP
