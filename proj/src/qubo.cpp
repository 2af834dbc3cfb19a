#include "tspcut/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

namespace tspcut {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// splitmix64 stream; bit-identical on every platform, unlike the standard
// library distributions.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Accumulates P * (sum_i coeff_i x_i - b)^2 into linear/quadratic/offset.
struct PenaltyBuilder {
  std::vector<double>& linear;
  std::map<std::pair<int, int>, double>& quadratic;
  double& offset;

  void add_square(std::span<const std::pair<int, double>> terms, double b,
                  double weight) {
    for (size_t a = 0; a < terms.size(); ++a) {
      const auto [ia, ca] = terms[a];
      linear[static_cast<size_t>(ia)] += weight * ca * (ca - 2.0 * b);
      for (size_t bidx = a + 1; bidx < terms.size(); ++bidx) {
        const auto [ib, cb] = terms[bidx];
        const auto key = ia < ib ? std::make_pair(ia, ib) : std::make_pair(ib, ia);
        quadratic[key] += 2.0 * weight * ca * cb;
      }
    }
    offset += weight * b * b;
  }
};

// Clipped binary expansion covering [0, r] exactly.
std::vector<double> slack_weights(int r) {
  std::vector<double> w;
  if (r <= 0) return w;
  int bits = 1;
  while ((1 << bits) < r + 1) ++bits;
  for (int t = 0; t < bits - 1; ++t) w.push_back(static_cast<double>(1 << t));
  w.push_back(static_cast<double>(r - ((1 << (bits - 1)) - 1)));
  return w;
}

}  // namespace

const RestrictedModel& QuboProblem::model() const {
  if (!model_) throw Error("raw QUBO has no attached model");
  return *model_;
}

double QuboProblem::energy(std::span<const std::uint8_t> x) const {
  if (x.size() != linear_.size())
    throw LengthMismatch("assignment length does not match variable count");
  double e = offset_;
  for (size_t i = 0; i < linear_.size(); ++i)
    if (x[i]) e += linear_[i];
  for (const auto& [key, q] : quadratic_)
    if (x[static_cast<size_t>(key.first)] && x[static_cast<size_t>(key.second)])
      e += q;
  return e;
}

QuboProblem QuboProblem::raw(
    std::vector<double> linear,
    std::vector<std::pair<std::pair<int, int>, double>> quadratic, double offset,
    double penalty_weight) {
  QuboProblem q;
  q.linear_ = std::move(linear);
  for (auto& [key, v] : quadratic) {
    if (key.first == key.second) throw OutOfRange("diagonal entries are linear");
    if (key.first > key.second) std::swap(key.first, key.second);
  }
  std::sort(quadratic.begin(), quadratic.end());
  q.quadratic_ = std::move(quadratic);
  q.offset_ = offset;
  q.penalty_ = penalty_weight;
  q.num_arc_vars_ = 0;
  q.tags_.assign(q.linear_.size(), VarTag{});
  return q;
}

QuboProblem to_qubo(const RestrictedModel& model, std::optional<double> penalty) {
  const Instance& inst = model.instance();
  const int n = inst.n();
  const double P = penalty.value_or(n * inst.max_cost() + 1.0);
  if (P <= 0) throw OutOfRange("penalty weight must be positive");

  QuboProblem q;
  q.model_ = model;
  q.penalty_ = P;
  q.num_arc_vars_ = inst.num_arcs();

  for (const Arc& a : inst.arcs()) {
    VarTag tag;
    tag.kind = VarTag::Kind::arc;
    tag.arc = a;
    q.tags_.push_back(tag);
  }
  q.linear_.assign(static_cast<size_t>(inst.num_arcs()), 0.0);
  for (int t = 0; t < inst.num_arcs(); ++t) {
    const Arc a = inst.arcs()[static_cast<size_t>(t)];
    q.linear_[static_cast<size_t>(t)] = inst.cost(a.from, a.to);
  }

  std::map<std::pair<int, int>, double> quadratic;
  PenaltyBuilder builder{q.linear_, quadratic, q.offset_};

  // Degree equalities: squared residuals, no slacks.
  std::vector<std::vector<std::pair<int, double>>> out_terms(
      static_cast<size_t>(n)),
      in_terms(static_cast<size_t>(n));
  for (int t = 0; t < inst.num_arcs(); ++t) {
    const Arc a = inst.arcs()[static_cast<size_t>(t)];
    out_terms[static_cast<size_t>(a.from)].push_back({t, 1.0});
    in_terms[static_cast<size_t>(a.to)].push_back({t, 1.0});
  }
  for (int v = 0; v < n; ++v) {
    builder.add_square(out_terms[static_cast<size_t>(v)], 1.0, P);
    builder.add_square(in_terms[static_cast<size_t>(v)], 1.0, P);
  }

  // SEC inequalities: sum of arcs inside S plus a slack integer equals |S|-1.
  for (int c = 0; c < model.num_cuts(); ++c) {
    const SecCut& cut = model.cuts()[static_cast<size_t>(c)];
    std::vector<std::pair<int, double>> terms;
    for (int t = 0; t < inst.num_arcs(); ++t) {
      const Arc a = inst.arcs()[static_cast<size_t>(t)];
      if (cut.contains(a.from) && cut.contains(a.to)) terms.push_back({t, 1.0});
    }
    const std::vector<double> weights = slack_weights(cut.rhs());
    for (size_t bit = 0; bit < weights.size(); ++bit) {
      VarTag tag;
      tag.kind = VarTag::Kind::slack;
      tag.cut_index = c;
      tag.bit = static_cast<int>(bit);
      tag.slack_weight = weights[bit];
      const int idx = static_cast<int>(q.tags_.size());
      q.tags_.push_back(tag);
      q.linear_.push_back(0.0);
      terms.push_back({idx, weights[bit]});
    }
    builder.add_square(terms, static_cast<double>(cut.rhs()), P);
  }

  q.quadratic_.assign(quadratic.begin(), quadratic.end());
  return q;
}

int compute_num_reads(const ReadSchedule& schedule, std::int64_t cuts) {
  if (cuts < 0) throw OutOfRange("cut count must be nonnegative");
  const std::int64_t target =
      schedule.n_start + static_cast<std::int64_t>(schedule.per_cut) * cuts;
  return static_cast<int>(std::min<std::int64_t>(target, schedule.num_reads_max()));
}

TimeBreakdown account_time(const PhaseTimers& phases, int num_reads,
                           const ReadSchedule& schedule) {
  if (phases.build_s < 0 || phases.conversion_s < 0 || phases.overhead_s < 0 ||
      phases.decode_s < 0)
    throw OutOfRange("phase timers must be nonnegative");
  TimeBreakdown t;
  t.build_s = phases.build_s;
  t.conversion_s = phases.conversion_s;
  t.overhead_s = phases.overhead_s;
  t.decode_s = phases.decode_s;
  t.solver_modeled_us =
      static_cast<std::int64_t>(num_reads) *
      (schedule.annealing_time_us + schedule.readout_time_us);
  t.total_s = t.build_s + t.conversion_s + t.overhead_s + t.decode_s +
              static_cast<double>(t.solver_modeled_us) * 1e-6;
  return t;
}

namespace {

struct AdjacencyView {
  std::vector<int> offsets;
  std::vector<std::pair<int, double>> entries;
};

AdjacencyView build_adjacency(const QuboProblem& qubo) {
  const int nv = qubo.num_vars();
  std::vector<int> degree(static_cast<size_t>(nv), 0);
  for (const auto& [key, q] : qubo.quadratic()) {
    ++degree[static_cast<size_t>(key.first)];
    ++degree[static_cast<size_t>(key.second)];
  }
  AdjacencyView adj;
  adj.offsets.assign(static_cast<size_t>(nv) + 1, 0);
  for (int i = 0; i < nv; ++i)
    adj.offsets[static_cast<size_t>(i) + 1] =
        adj.offsets[static_cast<size_t>(i)] + degree[static_cast<size_t>(i)];
  adj.entries.resize(static_cast<size_t>(adj.offsets.back()));
  std::vector<int> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& [key, q] : qubo.quadratic()) {
    adj.entries[static_cast<size_t>(cursor[static_cast<size_t>(key.first)]++)] = {
        key.second, q};
    adj.entries[static_cast<size_t>(cursor[static_cast<size_t>(key.second)]++)] = {
        key.first, q};
  }
  return adj;
}

void run_single_read(const QuboProblem& qubo, const AdjacencyView& adj,
                     std::span<const double> temperatures, std::uint64_t read_seed,
                     Sample& out) {
  const int nv = qubo.num_vars();
  Rng rng(read_seed);

  std::vector<std::uint8_t> x(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) x[static_cast<size_t>(i)] = rng.next() & 1u;

  std::vector<double> field(qubo.linear().begin(), qubo.linear().end());
  for (const auto& [key, q] : qubo.quadratic()) {
    if (x[static_cast<size_t>(key.second)]) field[static_cast<size_t>(key.first)] += q;
    if (x[static_cast<size_t>(key.first)]) field[static_cast<size_t>(key.second)] += q;
  }

  for (double T : temperatures) {
    const double invT = 1.0 / T;
    for (int i = 0; i < nv; ++i) {
      const double delta = x[static_cast<size_t>(i)] ? -field[static_cast<size_t>(i)]
                                                     : field[static_cast<size_t>(i)];
      if (delta > 0 && rng.uniform01() >= std::exp(-delta * invT)) continue;
      const double dir = x[static_cast<size_t>(i)] ? -1.0 : 1.0;
      x[static_cast<size_t>(i)] ^= 1u;
      const int begin = adj.offsets[static_cast<size_t>(i)];
      const int end = adj.offsets[static_cast<size_t>(i) + 1];
      for (int e = begin; e < end; ++e) {
        const auto [j, q] = adj.entries[static_cast<size_t>(e)];
        field[static_cast<size_t>(j)] += dir * q;
      }
    }
  }

  out.energy = qubo.energy(x);
  out.assignment = std::move(x);
}

}  // namespace

SampleSet anneal(const QuboProblem& qubo, int num_reads, int sweeps,
                 std::uint64_t seed) {
  if (num_reads < 1) throw OutOfRange("num_reads must be at least 1");
  if (sweeps < 1) throw OutOfRange("sweeps must be at least 1");

  const AdjacencyView adj = build_adjacency(qubo);

  double mean_abs_linear = 0.0;
  for (double l : qubo.linear()) mean_abs_linear += std::abs(l);
  if (!qubo.linear().empty())
    mean_abs_linear /= static_cast<double>(qubo.linear().size());

  const double t_start = std::max(qubo.penalty_weight(), 1e-9);
  double t_end = std::max(1e-3 * mean_abs_linear, 1e-12);
  t_end = std::min(t_end, t_start);
  std::vector<double> temperatures(static_cast<size_t>(sweeps));
  const double ratio = t_end / t_start;
  for (int k = 0; k < sweeps; ++k) {
    const double frac = sweeps == 1 ? 1.0 : static_cast<double>(k) / (sweeps - 1);
    temperatures[static_cast<size_t>(k)] = t_start * std::pow(ratio, frac);
  }

  SampleSet set;
  set.num_reads_used = num_reads;
  set.samples.resize(static_cast<size_t>(num_reads));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int num_threads = static_cast<int>(
      std::min<std::uint64_t>(hw, static_cast<std::uint64_t>(num_reads)));
  auto worker = [&](int tid) {
    for (int r = tid; r < num_reads; r += num_threads) {
      const std::uint64_t read_seed =
          splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1)));
      run_single_read(qubo, adj, temperatures, read_seed,
                      set.samples[static_cast<size_t>(r)]);
    }
  };
  if (num_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(num_threads));
    for (int t = 0; t < num_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  if (qubo.has_model()) {
    for (Sample& s : set.samples) {
      auto [sol, feasible] = decode(qubo, s.assignment, qubo.model());
      s.feasible = feasible;
    }
  }

  std::stable_sort(set.samples.begin(), set.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.energy < b.energy; });

  if (qubo.has_model()) {
    for (const Sample& s : set.samples) {
      if (s.feasible) {
        set.best_feasible = decode(qubo, s.assignment, qubo.model()).first;
        break;
      }
    }
  }
  return set;
}

std::pair<ArcSolution, bool> decode(const QuboProblem& qubo,
                                    std::span<const std::uint8_t> assignment,
                                    const RestrictedModel& model) {
  if (assignment.size() != static_cast<size_t>(qubo.num_vars()))
    throw LengthMismatch("assignment length does not match variable registry");
  std::vector<Arc> selected;
  for (int i = 0; i < qubo.num_arc_vars(); ++i)
    if (assignment[static_cast<size_t>(i)])
      selected.push_back(qubo.var_tags()[static_cast<size_t>(i)].arc);
  ArcSolution sol = evaluate(model, selected);
  const bool feasible =
      sol.degree_feasible && violated_cuts(model, sol).empty();
  return {std::move(sol), feasible};
}

std::string qubo_export_text(const QuboProblem& qubo) {
  std::string out;
  char buf[128];
  auto append = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
  };

  out += "# tspcut qubo v1\n";
  append("# vars %d arc %d slack %d\n", qubo.num_vars(), qubo.num_arc_vars(),
         qubo.num_slack_vars());
  append("# penalty %.17g\n", qubo.penalty_weight());
  append("# offset %.17g\n", qubo.offset());
  for (int i = 0; i < qubo.num_vars(); ++i) {
    const VarTag& tag = qubo.var_tags()[static_cast<size_t>(i)];
    if (tag.kind == VarTag::Kind::arc) {
      append("# var %d arc %d %d\n", i, tag.arc.from + 1, tag.arc.to + 1);
    } else {
      append("# var %d slack cut=%d bit=%d weight=%.17g\n", i, tag.cut_index,
             tag.bit, tag.slack_weight);
    }
  }
  for (int i = 0; i < qubo.num_vars(); ++i) {
    const double l = qubo.linear()[static_cast<size_t>(i)];
    if (l != 0.0) append("%d %d %.17g\n", i, i, l);
  }
  for (const auto& [key, q] : qubo.quadratic()) {
    if (q != 0.0) append("%d %d %.17g\n", key.first, key.second, q);
  }
  return out;
}

}  // namespace tspcut
