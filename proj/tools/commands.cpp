#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "io.hpp"
#include "qgeom/composite.hpp"
#include "qgeom/entanglement.hpp"
#include "qgeom/kraus.hpp"
#include "qgeom/random.hpp"
#include "qgeom/strata.hpp"
#include "report.hpp"

namespace qgeom::cli {

namespace {

using nlohmann::ordered_json;

ordered_json input_entry(const std::string& path, const std::string& bytes) {
  ordered_json entry;
  entry["path"] = path;
  entry["digest"] = input_digest(bytes);
  return entry;
}

void attach_warnings(ordered_json& doc, const std::vector<std::string>& warnings) {
  ordered_json list = ordered_json::array();
  for (const auto& w : warnings) {
    list.push_back(w);
    std::cerr << "warning: " << w << "\n";
  }
  doc["warnings"] = std::move(list);
}

std::vector<Eigen::Index> to_index_list(const std::vector<long long>& v) {
  std::vector<Eigen::Index> out;
  out.reserve(v.size());
  for (const auto x : v) {
    out.push_back(static_cast<Eigen::Index>(x));
  }
  return out;
}

// Factor dimensions: the explicit flag wins, then the file's dims field.
std::vector<Eigen::Index> resolve_dims(const std::vector<long long>& flag,
                                       const MatrixFile& file) {
  if (!flag.empty()) {
    return to_index_list(flag);
  }
  if (file.dims && file.dims->size() >= 2) {
    return *file.dims;
  }
  throw DomainError("factor dimensions required (--dims or file dims field)");
}

SignPattern parse_signs(const std::string& text) {
  SignPattern signs;
  for (const char c : text) {
    if (c == ',' || c == ' ') {
      continue;
    }
    if (c == '+') {
      signs.push_back(Sign::plus);
    } else if (c == '-') {
      signs.push_back(Sign::minus);
    } else {
      throw DomainError("sign pattern may contain only '+' and '-'");
    }
  }
  if (signs.empty()) {
    throw DomainError("empty sign pattern");
  }
  return signs;
}

ProjectorMixture parse_mixture(const std::string& text, std::size_t factors) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid mixture JSON: ") + err.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw ParseError("mixture file must be a non-empty array");
  }
  ProjectorMixture mix;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("signs") ||
        !item.contains("weight") || !item["signs"].is_array() ||
        !item["weight"].is_number()) {
      throw ParseError("mixture terms need 'signs' (array) and 'weight'");
    }
    SignPattern signs;
    for (const auto& s : item["signs"]) {
      if (!s.is_string()) {
        throw ParseError("mixture signs must be \"+\" or \"-\" strings");
      }
      const auto& str = s.get_ref<const std::string&>();
      if (str == "+") {
        signs.push_back(Sign::plus);
      } else if (str == "-") {
        signs.push_back(Sign::minus);
      } else {
        throw ParseError("mixture signs must be \"+\" or \"-\" strings");
      }
    }
    if (signs.size() != factors) {
      throw DomainError("mixture sign pattern length does not match factors");
    }
    mix.terms.emplace_back(std::move(signs), item["weight"].get<double>());
  }
  return mix;
}

std::string signs_to_string(const SignPattern& signs) {
  std::string out;
  for (const auto s : signs) {
    if (!out.empty()) {
      out += ",";
    }
    out += s == Sign::plus ? "+" : "-";
  }
  return out;
}

// Calibration constant of the bound machinery: the two-factor antisymmetric
// form evaluated on a maximally entangled two-qubit state, whose exact
// concurrence is 1.
double bell_calibration() {
  TensorFactorization fact({2, 2});
  Vector bell(4);
  bell << Complex(1.0 / std::sqrt(2.0), 0.0), 0.0, 0.0,
      Complex(1.0 / std::sqrt(2.0), 0.0);
  return pure_concurrence(bell, bipartite_form(fact));
}

}  // namespace

int run_density(const DensityOptions& opt) {
  const std::string bytes = read_input(opt.file);
  const MatrixFile file = parse_matrix_file(bytes, /*validate=*/false);
  if (file.kind != "hermitian" && file.kind != "density") {
    throw DomainError("density check requires a hermitian or density file");
  }
  const Matrix& m = file.matrices[0];
  if (m.rows() != m.cols()) {
    throw DomainError("density check requires a square matrix");
  }

  const double herm_res = hermiticity_residual(m);
  const Complex trace = m.trace();
  const double trace_res = std::abs(trace - Complex(1.0, 0.0));
  const HermitianOperator sym(Matrix(0.5 * (m + m.adjoint())), 1.0);
  const Spectrum spec = spectrum_of(sym);
  const double min_eig = spec.values(spec.values.size() - 1);
  const int rank = rank_of(sym, opt.tol_rank);
  const Signature sig = signature_of(sym, opt.tol_rank);

  const bool herm_ok = herm_res <= opt.tol_herm;
  const bool trace_ok = trace_res <= opt.tol_trace;
  const bool psd_ok = min_eig >= -opt.tol_psd;
  const bool pass = herm_ok && trace_ok && psd_ok;

  std::vector<std::string> warnings;
  if (!herm_ok) warnings.push_back("hermiticity residual exceeds tolerance");
  if (!trace_ok) warnings.push_back("trace differs from 1 beyond tolerance");
  if (!psd_ok) warnings.push_back("negative eigenvalue beyond tolerance");

  ordered_json doc;
  doc["command"] = "density";
  doc["inputs"] = ordered_json{{"file", input_entry(opt.file, bytes)}};
  ordered_json results;
  results["pass"] = pass;
  results["hermiticity_residual"] = herm_res;
  results["trace"] = ordered_json::array({trace.real(), trace.imag()});
  results["trace_residual"] = trace_res;
  results["min_eigenvalue"] = min_eig;
  results["rank"] = rank;
  results["signature"] =
      ordered_json{{"plus", sig.plus},
                   {"minus", sig.minus},
                   {"zero", static_cast<long long>(m.rows()) - sig.rank()}};
  results["extreme_point"] = pass && rank == 1;
  results["checks"] = ordered_json{
      {"hermitian", herm_ok}, {"unit_trace", trace_ok}, {"positive", psd_ok}};
  doc["results"] = std::move(results);
  doc["diagnostics"] = ordered_json{{"tol_herm", opt.tol_herm},
                                    {"tol_trace", opt.tol_trace},
                                    {"tol_psd", opt.tol_psd},
                                    {"tol_rank", opt.tol_rank}};
  attach_warnings(doc, warnings);
  emit_report(doc);
  return pass ? 0 : 1;
}

int run_chart(const ChartOptions& opt) {
  const std::string bytes = read_input(opt.file);
  const MatrixFile file = parse_matrix_file(bytes, /*validate=*/false);
  if (file.kind != "hermitian" && file.kind != "density") {
    throw DomainError("chart requires a hermitian or density file");
  }
  HermitianOperator xi(file.matrices[0]);

  if (opt.index_set.empty()) {
    throw DomainError("chart requires a non-empty index set (--J, 1-based)");
  }
  std::vector<Eigen::Index> indices;
  for (const auto j : opt.index_set) {
    if (j < 1 || j > xi.dim()) {
      throw DomainError("chart index out of range");
    }
    indices.push_back(static_cast<Eigen::Index>(j - 1));
  }
  std::sort(indices.begin(), indices.end());
  ChartIndex index_set(xi.dim(), indices);

  ChartCoordinates coords;
  try {
    coords = chart_forward(xi, index_set, opt.tol_rank);
  } catch (const std::invalid_argument& err) {
    throw DomainError(err.what());
  }

  ordered_json doc;
  doc["command"] = "chart";
  doc["inputs"] = ordered_json{{"file", input_entry(opt.file, bytes)}};
  ordered_json results;
  {
    ordered_json echo = ordered_json::array();
    for (const auto i : index_set.indices()) {
      echo.push_back(static_cast<long long>(i + 1));
    }
    results["index_set"] = std::move(echo);
  }
  results["rank"] = static_cast<long long>(index_set.k());
  {
    ordered_json diag = ordered_json::array();
    for (const auto d : coords.diag) {
      diag.push_back(d);
    }
    results["diag"] = std::move(diag);
  }
  {
    ordered_json pairs = ordered_json::array();
    ordered_json values = ordered_json::array();
    const auto pair_list = index_set.offdiag_pairs();
    for (std::size_t i = 0; i < pair_list.size(); ++i) {
      pairs.push_back(
          ordered_json::array({static_cast<long long>(pair_list[i].first + 1),
                               static_cast<long long>(pair_list[i].second + 1)}));
      values.push_back(ordered_json::array(
          {coords.offdiag[i].real(), coords.offdiag[i].imag()}));
    }
    results["offdiag_pairs"] = std::move(pairs);
    results["offdiag"] = std::move(values);
  }
  if (opt.roundtrip) {
    const HermitianOperator rebuilt = chart_reconstruct(coords, index_set);
    const double err =
        (rebuilt.matrix() - xi.matrix()).cwiseAbs().maxCoeff();
    results["roundtrip_error"] = err;
  }
  doc["results"] = std::move(results);
  doc["diagnostics"] = ordered_json{{"tol_rank", opt.tol_rank}};
  attach_warnings(doc, {});
  emit_report(doc);
  return 0;
}

int run_schmidt(const SchmidtOptions& opt) {
  const std::string bytes = read_input(opt.file);
  const MatrixFile file = parse_matrix_file(bytes);
  if (file.kind != "vector") {
    throw DomainError("schmidt requires a vector file");
  }
  const std::vector<Eigen::Index> dims = resolve_dims(opt.dims, file);
  if (dims.size() != 2) {
    throw DomainError("schmidt requires exactly two factor dimensions");
  }
  TensorFactorization fact(dims);
  const Vector& psi = file.vector_data;
  if (fact.total() != psi.size()) {
    throw DomainError("factor dimensions do not match the vector length");
  }

  std::vector<std::string> warnings;
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol::norm) {
    warnings.push_back("input vector is not normalized; coefficients scale "
                       "with the norm");
  }

  const SchmidtDecomposition dec = schmidt_decompose(psi, fact);
  const int number = schmidt_number(psi, fact);

  ordered_json doc;
  doc["command"] = "schmidt";
  doc["inputs"] = ordered_json{{"file", input_entry(opt.file, bytes)}};
  ordered_json results;
  {
    ordered_json coeffs = ordered_json::array();
    for (Eigen::Index i = 0; i < dec.coefficients.size(); ++i) {
      coeffs.push_back(dec.coefficients(i));
    }
    results["coefficients"] = std::move(coeffs);
  }
  results["schmidt_number"] = number;
  results["norm"] = norm;
  if (opt.frames) {
    results["left_frame"] = matrix_to_json(dec.left_frame);
    results["right_frame"] = matrix_to_json(dec.right_frame);
  }
  doc["results"] = std::move(results);
  doc["diagnostics"] = ordered_json{
      {"dims", ordered_json::array({static_cast<long long>(dims[0]),
                                    static_cast<long long>(dims[1])})},
      {"tol_rank", tol::rank_rel}};
  attach_warnings(doc, warnings);
  emit_report(doc);
  return 0;
}

int run_concurrence(const ConcurrenceOptions& opt) {
  const std::string bytes = read_input(opt.file);
  const MatrixFile file = parse_matrix_file(bytes);
  const std::vector<Eigen::Index> dims = resolve_dims(opt.dims, file);
  TensorFactorization fact(dims);

  std::vector<std::string> warnings;

  // Assemble the form: explicit mixture file, sign-pattern flag, or the
  // two-factor antisymmetric default.
  ConcurrenceForm form{fact, {}, false};
  std::string form_label;
  std::string mixture_bytes;
  if (!opt.mixture_file.empty()) {
    mixture_bytes = read_input(opt.mixture_file);
    const ProjectorMixture mix = parse_mixture(mixture_bytes, dims.size());
    try {
      form = mixture_form(fact, mix);
    } catch (const std::invalid_argument& err) {
      throw DomainError(err.what());
    }
    form_label = "mixture";
  } else if (!opt.signs.empty()) {
    const SignPattern signs = parse_signs(opt.signs);
    if (signs.size() != dims.size()) {
      throw DomainError("sign pattern length does not match factor count");
    }
    form = sign_pattern_form(fact, signs);
    form_label = signs_to_string(signs);
  } else if (dims.size() == 2) {
    form = bipartite_form(fact);
    form_label = "-,-";
  } else {
    throw DomainError("multipartite input needs --signs or --mixture");
  }

  if (form.degenerate) {
    warnings.push_back(
        "sign pattern has an odd number of '-' factors: the form vanishes "
        "identically and the value is 0");
  }

  ordered_json doc;
  doc["command"] = "concurrence";
  {
    ordered_json inputs;
    inputs["file"] = input_entry(opt.file, bytes);
    if (!opt.mixture_file.empty()) {
      inputs["mixture"] = input_entry(opt.mixture_file, mixture_bytes);
    }
    doc["inputs"] = std::move(inputs);
  }
  ordered_json results;
  results["mode"] = opt.mode;
  results["form"] = form_label;
  results["degenerate_form"] = form.degenerate;
  ordered_json diagnostics;
  {
    ordered_json dd = ordered_json::array();
    for (const auto d : dims) {
      dd.push_back(static_cast<long long>(d));
    }
    diagnostics["dims"] = std::move(dd);
  }
  diagnostics["form_rank"] = static_cast<long long>(form.chi.size());
  diagnostics["kappa_bell"] = bell_calibration();
  diagnostics["tol_rank"] = tol::rank_rel;

  if (opt.mode == "pure") {
    if (file.kind != "vector") {
      throw DomainError("mode pure requires a vector file");
    }
    const Vector& psi = file.vector_data;
    if (psi.size() != fact.total()) {
      throw DomainError("factor dimensions do not match the vector length");
    }
    double value = 0.0;
    try {
      value = pure_concurrence(psi, form);
    } catch (const std::invalid_argument& err) {
      throw DomainError(err.what());
    }
    results["value"] = value;
  } else if (opt.mode == "lower") {
    if (file.kind != "density") {
      throw DomainError("mode lower requires a density file");
    }
    DensityState rho(file.matrices[0]);
    if (rho.dim() != fact.total()) {
      throw DomainError("factor dimensions do not match the matrix size");
    }
    ZStrategy strategy = ZRefine{};
    if (opt.z_strategy == "single") {
      strategy = ZSingle{static_cast<int>(opt.z_index)};
    } else if (opt.z_strategy == "random") {
      strategy = ZRandom{static_cast<int>(opt.samples),
                         static_cast<uint64_t>(opt.seed)};
    } else if (opt.z_strategy == "refine") {
      strategy = ZRefine{static_cast<uint64_t>(opt.seed),
                         static_cast<int>(opt.iters)};
    } else {
      throw DomainError("z strategy must be single, random, or refine");
    }
    OptimizedBound bound{};
    try {
      bound = optimize_concurrence_lower_bound(rho, form, strategy);
    } catch (const std::invalid_argument& err) {
      throw DomainError(err.what());
    }
    results["value"] = bound.value;
    results["z"] = vector_to_json(bound.z);
    diagnostics["strategy"] = opt.z_strategy;
    diagnostics["seed"] = opt.seed;
    diagnostics["iters"] = opt.iters;
    diagnostics["samples"] = opt.samples;
    diagnostics["evaluations"] = bound.evaluations;
  } else if (opt.mode == "upper") {
    if (file.kind != "density") {
      throw DomainError("mode upper requires a density file");
    }
    DensityState rho(file.matrices[0]);
    if (rho.dim() != fact.total()) {
      throw DomainError("factor dimensions do not match the matrix size");
    }
    const int r = rank_of(rho.op());
    const Matrix v = Matrix::Identity(r, r);
    BoundResult bound{};
    try {
      bound = concurrence_upper_bound(rho, form, v);
    } catch (const std::invalid_argument& err) {
      throw DomainError(err.what());
    }
    results["value"] = bound.value;
    diagnostics["decomposition"] = "spectral";
    diagnostics["v_digest"] = input_digest(render_json(matrix_to_json(v)));
  } else {
    throw DomainError("mode must be pure, lower, or upper");
  }

  doc["results"] = std::move(results);
  doc["diagnostics"] = std::move(diagnostics);
  attach_warnings(doc, warnings);
  emit_report(doc);
  return 0;
}

int run_kraus(const KrausOptions& opt) {
  const std::string kraus_bytes = read_input(opt.kraus_file);
  const MatrixFile kraus_file = parse_matrix_file(kraus_bytes);
  if (kraus_file.kind != "kraus") {
    throw DomainError("kraus command requires a kraus file");
  }
  const std::string state_bytes = read_input(opt.state_file);
  const MatrixFile state_file = parse_matrix_file(state_bytes);
  if (state_file.kind != "density" && state_file.kind != "hermitian") {
    throw DomainError("state file must be hermitian or density");
  }

  KrausMap map = [&] {
    try {
      return KrausMap(kraus_file.matrices);
    } catch (const std::invalid_argument& err) {
      throw DomainError(err.what());
    }
  }();
  if (map.dim() != state_file.matrices[0].rows()) {
    throw DomainError("kraus operators and state have mismatched dimensions");
  }

  ordered_json doc;
  doc["command"] = "kraus";
  doc["inputs"] =
      ordered_json{{"kraus", input_entry(opt.kraus_file, kraus_bytes)},
                   {"state", input_entry(opt.state_file, state_bytes)}};
  ordered_json results;

  HermitianOperator state(state_file.matrices[0]);
  if (opt.normalize) {
    DensityState rho(state);
    DensityState image = [&] {
      try {
        return normalized_apply(map, rho);
      } catch (const std::invalid_argument& err) {
        throw DomainError(err.what());
      }
    }();
    MatrixFile out;
    out.kind = "density";
    out.dims = state_file.dims;
    out.matrices.push_back(image.matrix());
    results["output"] = matrix_file_json(out);
    results["image_trace"] = apply(map, state).matrix().trace().real();
  } else {
    const HermitianOperator image = apply(map, state);
    MatrixFile out;
    out.kind = "hermitian";
    out.dims = state_file.dims;
    out.matrices.push_back(image.matrix());
    results["output"] = matrix_file_json(out);
    results["image_trace"] = image.matrix().trace().real();
  }

  results["nondegenerate"] = is_nondegenerate(map);
  if (opt.canonical) {
    const KrausMap canon = canonical_form(map);
    MatrixFile out;
    out.kind = "kraus";
    for (const auto& op : canon.ops()) {
      out.matrices.push_back(op);
    }
    results["canonical"] = matrix_file_json(out);
    results["canonical_size"] = static_cast<long long>(canon.size());
    results["group_element"] = as_group_element(map).has_value();
  }

  doc["results"] = std::move(results);
  doc["diagnostics"] = ordered_json{{"operators",
                                     static_cast<long long>(map.size())},
                                    {"tol_psd", tol::psd}};
  attach_warnings(doc, {});
  emit_report(doc);
  return 0;
}

int run_random(const RandomOptions& opt) {
  if (opt.dims.empty()) {
    throw DomainError("random requires --dims");
  }
  const std::vector<Eigen::Index> dims = to_index_list(opt.dims);
  Eigen::Index total = 1;
  for (const auto d : dims) {
    if (d < 1) {
      throw DomainError("dimensions must be positive");
    }
    total *= d;
  }
  if (total < 1) {
    throw DomainError("total dimension must be positive");
  }

  Rng rng(static_cast<uint64_t>(opt.seed));
  MatrixFile out;
  if (dims.size() >= 2) {
    out.dims = dims;
  }

  if (opt.kind == "pure") {
    out.kind = "vector";
    out.vector_data = random_pure_state(rng, total);
  } else if (opt.kind == "density") {
    const Eigen::Index rank = opt.rank == 0 ? total : opt.rank;
    if (rank < 1 || rank > total) {
      throw DomainError("rank must lie in [1, total dimension]");
    }
    out.kind = "density";
    out.matrices.push_back(random_density(rng, total, rank).matrix());
  } else if (opt.kind == "kraus") {
    if (opt.count < 1) {
      throw DomainError("kraus count must be positive");
    }
    out.kind = "kraus";
    const KrausMap map = random_kraus(rng, total, static_cast<int>(opt.count));
    for (const auto& op : map.ops()) {
      out.matrices.push_back(op);
    }
  } else {
    throw DomainError("kind must be pure, density, or kraus");
  }

  emit_report(matrix_file_json(out));
  return 0;
}

}  // namespace qgeom::cli
