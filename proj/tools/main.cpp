#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "io.hpp"
#include "qgeom/types.hpp"
#include "report.hpp"

namespace {

// Uniform error surface: a minimal JSON document on stdout, the message on
// stderr, exit code 1 (domain) or 2 (parse / I/O).
int fail(const std::string& command, const std::string& message, int code) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["error"] = message;
  doc["exit_code"] = code;
  qgeom::cli::emit_report(doc);
  std::cerr << "error: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of Hermitian operators and density states: "
               "validation, charts, Schmidt data, concurrence bounds, Kraus "
               "actions, and random instances with JSON I/O"};
  app.require_subcommand(1);

  qgeom::cli::DensityOptions density_opt{
      "", qgeom::tol::herm, qgeom::tol::trace, qgeom::tol::psd,
      qgeom::tol::rank_rel};
  auto* density = app.add_subcommand(
      "density", "Validate a state file and report its spectral data");
  density->add_option("file", density_opt.file, "input file or - for stdin")
      ->required();
  density->add_option("--tol-herm", density_opt.tol_herm,
                      "hermiticity tolerance");
  density->add_option("--tol-trace", density_opt.tol_trace,
                      "unit-trace tolerance");
  density->add_option("--tol-psd", density_opt.tol_psd,
                      "positivity tolerance");
  density->add_option("--tol-rank", density_opt.tol_rank,
                      "relative rank cutoff");

  qgeom::cli::ChartOptions chart_opt{"", {}, false, qgeom::tol::rank_rel};
  auto* chart = app.add_subcommand(
      "chart", "Chart coordinates of a fixed-rank Hermitian matrix");
  chart->add_option("file", chart_opt.file, "input file or - for stdin")
      ->required();
  chart->add_option("--J", chart_opt.index_set,
                    "index set (1-based, comma separated)")
      ->required()
      ->delimiter(',');
  chart->add_flag("--roundtrip", chart_opt.roundtrip,
                  "reconstruct and report the max-abs error");
  chart->add_option("--tol-rank", chart_opt.tol_rank, "relative rank cutoff");

  qgeom::cli::SchmidtOptions schmidt_opt;
  auto* schmidt = app.add_subcommand(
      "schmidt", "Schmidt coefficients of a bipartite vector");
  schmidt->add_option("file", schmidt_opt.file, "input file or - for stdin")
      ->required();
  schmidt->add_option("--dims", schmidt_opt.dims,
                      "factor dimensions n1,n2")
      ->delimiter(',');
  schmidt->add_flag("--frames", schmidt_opt.frames,
                    "emit the orthonormal frames");

  qgeom::cli::ConcurrenceOptions conc_opt;
  auto* conc = app.add_subcommand(
      "concurrence", "Concurrence values and convex-roof bounds");
  conc->add_option("file", conc_opt.file, "input file or - for stdin")
      ->required();
  conc->add_option("--dims", conc_opt.dims, "factor dimensions, comma separated")
      ->delimiter(',');
  conc->add_option("--signs", conc_opt.signs,
                   "sign pattern, e.g. -,- or +,-,-");
  conc->add_option("--mixture", conc_opt.mixture_file,
                   "JSON file with [{signs, weight}, ...] terms");
  conc->add_option("--mode", conc_opt.mode, "pure | lower | upper")
      ->check(CLI::IsMember({"pure", "lower", "upper"}));
  conc->add_option("--z-strategy", conc_opt.z_strategy,
                   "single | random | refine")
      ->check(CLI::IsMember({"single", "random", "refine"}));
  conc->add_option("--z-index", conc_opt.z_index,
                   "basis index for --z-strategy single");
  conc->add_option("--seed", conc_opt.seed, "random seed");
  conc->add_option("--iters", conc_opt.iters, "refinement sweeps");
  conc->add_option("--samples", conc_opt.samples,
                   "random sample count for --z-strategy random");

  qgeom::cli::KrausOptions kraus_opt;
  auto* kraus = app.add_subcommand(
      "kraus", "Apply an operator-sum map to a state");
  kraus->add_option("kraus_file", kraus_opt.kraus_file, "kraus file")
      ->required();
  kraus->add_option("state_file", kraus_opt.state_file,
                    "state file or - for stdin")
      ->required();
  kraus->add_flag("--normalize", kraus_opt.normalize,
                  "trace-normalized action on a density input");
  kraus->add_flag("--canonical", kraus_opt.canonical,
                  "also emit the orthogonalized minimal operator list");

  qgeom::cli::RandomOptions random_opt;
  auto* random = app.add_subcommand(
      "random", "Seeded random instance written as a state file");
  random->add_option("--kind", random_opt.kind, "pure | density | kraus")
      ->check(CLI::IsMember({"pure", "density", "kraus"}));
  random->add_option("--dims", random_opt.dims,
                     "factor dimensions, comma separated")
      ->required()
      ->delimiter(',');
  random->add_option("--rank", random_opt.rank,
                     "rank for --kind density (default: full)");
  random->add_option("--count", random_opt.count,
                     "operator count for --kind kraus");
  random->add_option("--seed", random_opt.seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (density->parsed()) return qgeom::cli::run_density(density_opt);
    if (chart->parsed()) return qgeom::cli::run_chart(chart_opt);
    if (schmidt->parsed()) return qgeom::cli::run_schmidt(schmidt_opt);
    if (conc->parsed()) return qgeom::cli::run_concurrence(conc_opt);
    if (kraus->parsed()) return qgeom::cli::run_kraus(kraus_opt);
    if (random->parsed()) return qgeom::cli::run_random(random_opt);
  } catch (const qgeom::cli::ParseError& err) {
    return fail(name, err.what(), 2);
  } catch (const qgeom::cli::DomainError& err) {
    return fail(name, err.what(), 1);
  } catch (const std::invalid_argument& err) {
    return fail(name, err.what(), 1);
  } catch (const std::exception& err) {
    return fail(name, err.what(), 1);
  }
  return 0;
}
