#ifndef TSPCUT_EXPERIMENTS_HPP
#define TSPCUT_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tspcut/cpa.hpp"
#include "tspcut/tsplib.hpp"

namespace tspcut {

enum class Variant { cilp_nocaf, cilp_caf, cpa_nocaf, cpa_caf };

std::string to_string(Variant v);
std::optional<Variant> parse_variant(const std::string& name);
bool variant_uses_caf(Variant v);
bool variant_is_cilp(Variant v);

enum class OutputFormat { csv, json };

struct ExperimentSpec {
  std::string instance_path = "berlin52.tsp";
  std::vector<int> sizes;
  std::vector<Variant> variants = {Variant::cilp_nocaf, Variant::cilp_caf,
                                   Variant::cpa_nocaf, Variant::cpa_caf};
  Backend backend = Backend::exact;
  int runs = 5;
  std::uint64_t seed = 42;
  int sweeps = 2000;
  std::optional<double> budget_s;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  bool check = false;
  bool timings = false;
};

/// Resolves an instance path against the working directory and, when set,
/// the TSPCUT_INSTANCE_DIR environment variable. "-" selects stdin.
RawInstance load_instance(const std::string& path);

struct ComplexityRow {
  int n = 0;
  std::int64_t var_nocaf = 0;
  std::int64_t var_caf = 0;
  /// Absent where the full SEC family is beyond the enumeration guard
  /// (reported as "--", matching the published table).
  std::optional<std::int64_t> constr_cilp;
  std::int64_t constr_cpa_nocaf = 0;
  std::int64_t constr_cpa_caf = 0;
  int var_reduction_pct = 0;  // recomputable from the Var cells
  std::optional<int> constr_reduction_pct;  // from the with-CAF cells
};

std::vector<ComplexityRow> run_complexity(const RawInstance& raw,
                                          const std::vector<int>& sizes);

struct SolveRow {
  int n = 0;
  Variant variant = Variant::cpa_caf;
  Backend backend = Backend::exact;
  int runs = 0;
  std::optional<double> of_avg;
  std::optional<double> of_dev;
  double modeled_solve_s_avg = 0.0;
  double modeled_solve_s_dev = 0.0;
  double iters_avg = 0.0;
  double iters_dev = 0.0;
  double cuts_avg = 0.0;
  double cuts_dev = 0.0;
  std::optional<double> gap_pct;
  double feas_pct = 0.0;
  double wall_total_s_avg = 0.0;
  double wall_total_s_dev = 0.0;
  double wall_solve_s_avg = 0.0;
  double wall_solve_s_dev = 0.0;
  std::string error;  // nonempty: row failed, cells print as "--"
  std::vector<CpaTrace> traces;
};

std::vector<SolveRow> run_solve(const RawInstance& raw, const ExperimentSpec& spec);

void write_complexity(std::ostream& out, const std::vector<ComplexityRow>& rows,
                      OutputFormat format);
void write_solve(std::ostream& out, const std::vector<SolveRow>& rows,
                 OutputFormat format, bool timings);

/// Reference cells frozen from published berlin52-prefix results; verified
/// against the independent oracles in the test suite.
struct ReferenceTables {
  static std::optional<std::int64_t> cilp_constraints(int n);
  static std::optional<std::int64_t> caf_vars(int n);
  static std::optional<double> optimum(int n, bool caf);
};

/// --check mode: recompute and compare against the reference cells. Returns
/// the number of mismatches and prints one line per checked cell.
int check_complexity(std::ostream& out, const std::vector<ComplexityRow>& rows);
int check_solve(std::ostream& out, const std::vector<SolveRow>& rows);

/// Text QUBO export for size n: CPA variants export the cut-free model,
/// CILP variants the fully enumerated one.
std::string export_qubo_text(const RawInstance& raw, int n, Variant variant);

}  // namespace tspcut

#endif  // TSPCUT_EXPERIMENTS_HPP
