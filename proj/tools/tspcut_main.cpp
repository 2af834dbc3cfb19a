#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tspcut/experiments.hpp"

namespace {

using namespace tspcut;

std::vector<int> default_sizes() {
  return {5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 20, 25, 30, 35, 40, 45};
}

Backend parse_backend(const std::string& name) {
  if (name == "exact") return Backend::exact;
  if (name == "anneal") return Backend::anneal;
  if (name == "hybrid" || name == "hybrid_emulation")
    return Backend::hybrid_emulation;
  throw CLI::ValidationError("--backend", "unknown backend: " + name);
}

std::vector<Variant> parse_variants(const std::vector<std::string>& names) {
  std::vector<Variant> variants;
  for (const std::string& name : names) {
    if (name == "all") {
      return {Variant::cilp_nocaf, Variant::cilp_caf, Variant::cpa_nocaf,
              Variant::cpa_caf};
    }
    const auto v = parse_variant(name);
    if (!v)
      throw CLI::ValidationError(
          "--variant", "expected cilp_nocaf|cilp_caf|cpa_nocaf|cpa_caf|all");
    variants.push_back(*v);
  }
  return variants;
}

// Writes to the path or stdout, then runs the optional check pass.
template <typename WriteFn, typename CheckFn>
int emit(const std::string& output_path, bool check, WriteFn&& write,
         CheckFn&& run_check) {
  if (output_path.empty()) {
    write(std::cout);
  } else {
    std::ofstream out(output_path);
    if (!out) throw Error("cannot open output file: " + output_path);
    write(out);
  }
  if (!check) return 0;
  const int mismatches = run_check(std::cerr);
  if (mismatches > 0) {
    std::cerr << mismatches << " reference cell(s) deviated\n";
    return 1;
  }
  std::cerr << "all checked cells match\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "TSP cutting-plane toolkit: model-size tables, exact and annealing "
      "solvers, QUBO export (berlin52-style EUC_2D instances)"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string backend_name = "exact";
  std::vector<std::string> variant_names = {"all"};
  std::string format_name = "csv";
  int export_n = 0;
  std::string export_variant = "cpa_caf";

  auto add_common = [&](CLI::App* cmd, bool with_solver_flags) {
    cmd->add_option("--instance", spec.instance_path,
                    "TSPLIB EUC_2D file, '-' for stdin (searched in "
                    "TSPCUT_INSTANCE_DIR as fallback)")
        ->capture_default_str();
    cmd->add_option("--output", spec.output_path, "output file (default stdout)");
    cmd->add_option("--format", format_name, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    if (with_solver_flags) {
      cmd->add_option("--sizes", spec.sizes, "prefix sizes n to run")
          ->delimiter(',');
      cmd->add_flag("--check", spec.check,
                    "compare against the embedded reference cells; nonzero "
                    "exit on deviation");
    }
  };

  CLI::App* complexity = app.add_subcommand(
      "complexity", "variable/constraint counts for all four variants");
  add_common(complexity, true);

  CLI::App* solve = app.add_subcommand(
      "solve", "run the configured solver over sizes and variants");
  add_common(solve, true);
  solve->add_option("--variant", variant_names,
                    "cilp_nocaf|cilp_caf|cpa_nocaf|cpa_caf|all")
      ->delimiter(',');
  solve->add_option("--backend", backend_name, "exact|anneal|hybrid")
      ->capture_default_str();
  solve->add_option("--runs", spec.runs, "seeded runs per row (non-exact)")
      ->capture_default_str();
  solve->add_option("--seed", spec.seed, "base seed; run r uses seed+r")
      ->capture_default_str();
  solve->add_option("--sweeps", spec.sweeps, "annealing sweeps per read")
      ->capture_default_str();
  solve->add_option("--budget-s", [&spec](const std::vector<std::string>& vals) {
    spec.budget_s = std::stod(vals.front());
    return true;
  }, "per-iteration solver budget in seconds");
  solve->add_flag("--timings", spec.timings,
                  "append wall-clock columns (not reproducible run to run)");

  CLI::App* export_qubo = app.add_subcommand(
      "export-qubo", "write the penalized QUBO of one size/variant as text");
  add_common(export_qubo, false);
  export_qubo->add_option("--n", export_n, "prefix size")->required();
  export_qubo->add_option("--variant", export_variant,
                          "cpa_* exports the cut-free model, cilp_* the fully "
                          "enumerated one")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    spec.format = format_name == "json" ? OutputFormat::json : OutputFormat::csv;
    const RawInstance raw = load_instance(spec.instance_path);

    if (complexity->parsed()) {
      if (spec.sizes.empty()) spec.sizes = default_sizes();
      const auto rows = run_complexity(raw, spec.sizes);
      return emit(
          spec.output_path, spec.check,
          [&](std::ostream& out) { write_complexity(out, rows, spec.format); },
          [&](std::ostream& out) { return check_complexity(out, rows); });
    }

    if (solve->parsed()) {
      if (spec.sizes.empty())
        throw Error("solve requires --sizes (e.g. --sizes 5,6,7)");
      spec.backend = parse_backend(backend_name);
      spec.variants = parse_variants(variant_names);
      const auto rows = run_solve(raw, spec);
      return emit(
          spec.output_path, spec.check,
          [&](std::ostream& out) {
            write_solve(out, rows, spec.format, spec.timings);
          },
          [&](std::ostream& out) { return check_solve(out, rows); });
    }

    // export-qubo
    const auto variant = parse_variant(export_variant);
    if (!variant)
      throw Error("unknown variant: " + export_variant);
    const std::string text = export_qubo_text(raw, export_n, *variant);
    if (spec.output_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(spec.output_path, std::ios::binary);
      if (!out) throw Error("cannot open output file: " + spec.output_path);
      out << text;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
