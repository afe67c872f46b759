#include "grafield/cli/run.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "grafield/cli/datasets.hpp"
#include "grafield/clustering.hpp"
#include "grafield/error.hpp"
#include "grafield/graph_io.hpp"
#include "grafield/kernel.hpp"
#include "grafield/regression.hpp"
#include "grafield/smoothing.hpp"
#include "grafield/spectral.hpp"

namespace grafield::cli {
namespace {

using nlohmann::json;

std::vector<std::string> numbered(const std::string& prefix, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

std::vector<std::string> with_first(std::string first, std::vector<std::string> rest) {
  rest.insert(rest.begin(), std::move(first));
  return rest;
}

OperatorParams resolve_params(const RunConfig& c, const Graph& g, OperatorKind kind, json& report) {
  OperatorParams params;
  params.alpha = c.alpha;
  const bool regularized = kind == OperatorKind::RegLaplacianI || kind == OperatorKind::RegLaplacianII;
  if (regularized) {
    const auto resolved = resolve_tau(parse_tau(c.tau), g);
    if (resolved.warning) report["warnings"].push_back(*resolved.warning);
    params.tau = resolved.value;
    report["tau"] = params.tau;
  }
  if (kind == OperatorKind::PageRank) report["alpha"] = params.alpha;
  return params;
}

// Emits either a CSV file or a member of the JSON report.
void emit_table(RunOutput& run, json& report, const RunConfig& c, const std::string& name,
                const std::vector<std::string>& header, const std::vector<std::string>& rows, const Eigen::MatrixXd& values) {
  if (c.format == "csv") {
    run.artifacts.add(name + ".csv", csv_table(header, rows, values));
    return;
  }
  json table{{"columns", header}, {"values", json_matrix(values)}};
  if (!rows.empty()) table["rows"] = rows;
  report[name] = std::move(table);
}

void finish(RunOutput& run, json report, const RunConfig& c) {
  report["meta"] = make_meta(c);
  run.artifacts.add_json(c.format == "csv" ? "report.json" : c.subcommand + ".json", report);
}

json new_report() { return json{{"warnings", json::array()}}; }

RunOutput run_grafield(const RunConfig& c) {
  RunOutput run;
  json report = new_report();
  const Graph g = io::read_graph(c.input);
  const auto policy = parse_tau(c.tau);
  const auto tau = resolve_tau(policy, g);
  if (tau.warning) report["warnings"].push_back(*tau.warning);
  const VertexPmf p = tau.value == 0.0 ? vertex_pmf_mle(g) : smooth_vertex_pmf(g, tau.value);
  const NetworkPmf P = tau.value == 0.0 ? network_pmf_mle(g) : smooth_network_pmf(g, tau.value);
  const auto field = empirical_grafield(P, p);
  report["vertices"] = g.size();
  report["total_weight"] = g.total_mass();
  report["tau"] = tau.value;
  report["entropy"] = graph_entropy(field);
  emit_table(run, report, c, "grafield", with_first("vertex", g.labels()), g.labels(), field.density());
  finish(run, std::move(report), c);
  return run;
}

std::map<std::string, double> read_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open signal file " + path);
  std::map<std::string, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError(path + ":" + std::to_string(line_no) + ": expected 'vertex,value'");
    const std::string v = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double x = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing text");
      out[v] = x;
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw DataError(path + ":" + std::to_string(line_no) + ": '" + value + "' is not a number");
    }
  }
  return out;
}

RunOutput run_spectrum(const RunConfig& c) {
  RunOutput run;
  json report = new_report();
  const Graph g = io::read_graph(c.input);
  const OperatorKind kind = *parse_operator(c.op);
  const OperatorParams params = resolve_params(c, g, kind, report);
  report["operator"] = to_string(kind);
  report["route"] = c.route;

  if (c.route == "operator") {
    const auto spec = operator_spectrum(shift_operator(g, kind, params), c.top);
    Eigen::MatrixXd values(spec.eigenvalues.size(), 2);
    values << spec.eigenvalues, spec.eigenvalues.cwiseAbs();
    emit_table(run, report, c, "eigenvalues", {"index", "eigenvalue", "magnitude"}, numbered("", values.rows()), values);
    emit_table(run, report, c, "vectors", with_first("vertex", numbered("v", spec.vectors.cols())), g.labels(),
               spec.vectors);
    finish(run, std::move(report), c);
    return run;
  }
  if (kind == OperatorKind::PageRank) {
    throw ValidationError("pagerank has no symmetric G-matrix form; use --route operator");
  }
  const auto dec = graph_spectrum(g, kind, params, c.top);
  for (const auto& w : dec.warnings) report["warnings"].push_back(w);
  report["trivial_eigenvalue"] = dec.trivial_eigenvalue;
  report["basis"] = to_string(dec.basis_kind);
  Eigen::MatrixXd values(dec.eigenvalues.size(), 2);
  values << dec.eigenvalues, dec.eigenvalues.cwiseAbs();
  emit_table(run, report, c, "eigenvalues", {"index", "eigenvalue", "magnitude"}, numbered("", values.rows()), values);
  emit_table(run, report, c, "phi", with_first("vertex", numbered("phi", dec.phi.cols())), g.labels(), dec.phi);

  if (!c.signal.empty()) {
    const auto signal = read_signal(c.signal);
    Eigen::VectorXd y(Eigen::Index(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto it = signal.find(g.label(i));
      if (it == signal.end()) throw DataError("signal file has no value for vertex '" + g.label(i) + "'");
      y[Eigen::Index(i)] = it->second;
    }
    const VertexPmf p(dec.weights, dec.weight_source);
    const auto coeffs = gft(y, dec, p, c.unweighted_gft ? GftWeighting::Unweighted : GftWeighting::Weighted);
    report["gft_weighting"] = c.unweighted_gft ? "unweighted" : "weighted";
    emit_table(run, report, c, "gft", {"index", "coefficient"}, numbered("", coeffs.size()), coeffs);
  }
  finish(run, std::move(report), c);
  return run;
}

RunOutput run_embed(const RunConfig& c) {
  RunOutput run;
  json report = new_report();
  const Graph g = io::read_graph(c.input);
  const OperatorKind kind = *parse_operator(c.op);
  const OperatorParams params = resolve_params(c, g, kind, report);
  if (kind == OperatorKind::PageRank) throw ValidationError("embed needs a symmetric operator");
  const auto dec = graph_spectrum(g, kind, params, c.k);
  for (const auto& w : dec.warnings) report["warnings"].push_back(w);
  report["operator"] = to_string(kind);
  report["embedding"] = c.embedding;
  report["eigenvalues"] = json_vector(dec.eigenvalues);
  Eigen::MatrixXd coords;
  if (c.embedding == "diffusion") {
    auto emb = diffusion_coords(dec, c.t, 0);
    for (const auto& w : emb.warnings) report["warnings"].push_back(w);
    coords = std::move(emb.coords);
    report["t"] = c.t;
  } else {
    coords = dec.phi;
  }
  emit_table(run, report, c, "coords", with_first("vertex", numbered("c", coords.cols())), g.labels(), coords);
  finish(run, std::move(report), c);
  return run;
}

Graph largest_component(const Graph& g, json& report) {
  const auto comp = g.components();
  std::map<std::size_t, std::size_t> sizes;
  for (auto id : comp) ++sizes[id];
  std::size_t best = 0;
  for (const auto& [id, size] : sizes) {
    if (size > sizes[best]) best = id;
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (comp[i] == best) keep.push_back(i);
  }
  report["components"] = sizes.size();
  report["dropped_vertices"] = g.size() - keep.size();
  return g.subgraph(keep);
}

RunOutput run_cluster(const RunConfig& c) {
  RunOutput run;
  json report = new_report();
  Graph g = io::read_graph(c.input);
  if (c.largest_component) g = largest_component(g, report);
  const OperatorKind kind = *parse_operator(c.op);
  const OperatorParams params = resolve_params(c, g, kind, report);

  ClusterOptions options;
  options.restarts = c.restarts;
  options.row_normalize = c.row_normalize;
  options.full_dimension = c.full_dimension;
  const auto result = spectral_cluster(g, c.k, kind, params, c.seed, options);
  for (const auto& w : result.warnings) report["warnings"].push_back(w);
  report["operator"] = to_string(kind);
  report["k"] = c.k;
  report["vertices"] = g.size();
  report["wcss"] = result.wcss;
  report["seed"] = result.seed;
  report["restarts"] = result.restarts;

  // Spectral-gap suggestion from the leading part of the same spectrum.
  const std::size_t probe = std::min<std::size_t>(g.size() - 1, std::max<std::size_t>(10, 2 * c.k));
  Eigen::VectorXd lead;
  if (kind == OperatorKind::PageRank) {
    const auto spec = operator_spectrum(shift_operator(g, kind, params), probe + 1);
    lead = spec.eigenvalues.tail(spec.eigenvalues.size() - 1);
  } else {
    lead = graph_spectrum(g, kind, params, probe).eigenvalues;
  }
  if (lead.size() >= 2) report["k_suggested"] = choose_k_spectral_gap(lead);
  report["eigenvalues"] = json_vector(lead);

  if (!c.labels.empty()) {
    const auto truth_map = io::read_labels(c.labels);
    std::map<std::string, int> classes;
    std::vector<int> truth;
    for (const auto& v : g.labels()) {
      const auto it = truth_map.find(v);
      if (it == truth_map.end()) throw DataError("labels file has no entry for vertex '" + v + "'");
      truth.push_back(classes.emplace(it->second, int(classes.size()) + 1).first->second);
    }
    report["misclassification"] = misclassification(result.labels, truth);
    report["true_classes"] = classes.size();
  }

  Eigen::MatrixXd labels(Eigen::Index(g.size()), 1);
  for (std::size_t i = 0; i < g.size(); ++i) labels(Eigen::Index(i), 0) = result.labels[i];
  emit_table(run, report, c, "labels", {"vertex", "cluster"}, g.labels(), labels);
  finish(run, std::move(report), c);
  return run;
}

RunOutput run_regress(const RunConfig& c) {
  RunOutput run;
  json report = new_report();
  const SpatialDataset data = read_spatial_csv(c.input);
  RegressionOptions options;
  options.k = c.k;
  options.kind = *parse_operator(c.op);
  options.tau = parse_tau(c.tau);
  options.log_y = c.log_y;
  options.one_hot = c.one_hot;
  options.weighting = c.gaussian_edges ? EdgeWeighting::Gaussian : EdgeWeighting::Binary;
  options.cv.seed = c.seed;
  if (c.lambda != "auto") {
    try {
      std::size_t used = 0;
      options.lambda = std::stod(c.lambda, &used);
      if (used != c.lambda.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ValidationError("--lambda must be 'auto' or a number (got '" + c.lambda + "')");
    }
  }
  const auto fit = spectral_regression(data, options);
  for (const auto& w : fit.warnings) report["warnings"].push_back(w);
  report["observations"] = data.size();
  report["r2"] = fit.r2;
  report["r2_cv"] = fit.r2_cv;
  report["lambda"] = fit.lambda;
  report["nonzero"] = fit.selected.size();
  report["intercept"] = fit.intercept;
  report["objective"] = fit.objective;
  report["tau"] = fit.tau;
  report["minimax_tau"] = fit.minimax_tau;
  report["radius"] = fit.radius;
  json beta = json::object();
  for (std::size_t j = 0; j < fit.names.size(); ++j) beta[fit.names[j]] = fit.beta[Eigen::Index(j)];
  report["beta"] = beta;

  if (c.format == "csv") {
    std::ostringstream coef;
    coef << "name,beta\n";
    for (std::size_t j = 0; j < fit.names.size(); ++j) coef << fit.names[j] << ',' << format_number(fit.beta[Eigen::Index(j)]) << '\n';
    run.artifacts.add("coefficients.csv", coef.str());
  }
  if (fit.phi.size() > 0) {
    emit_table(run, report, c, "phi", with_first("observation", numbered("phi", fit.phi.cols())),
               numbered("", fit.phi.rows()), fit.phi);
  }
  finish(run, std::move(report), c);
  return run;
}

RunOutput run_smooth(const RunConfig& c) {
  RunOutput run;
  json report = new_report();
  const Graph g = io::read_graph(c.input);
  std::optional<VertexPmf> p;
  if (c.estimator == "good-turing") {
    auto gt = good_turing_pmf(g);
    report["fallback_vertices"] = gt.fallback_count();
    report["raw_total"] = gt.raw_total;
    p = std::move(gt.pmf);
  } else {
    // An explicit nonzero --tau overrides the estimator's own rule.
    TauPolicy policy = TauPolicy::fixed(0.0);
    if (c.tau != "0") policy = parse_tau(c.tau);
    else if (c.estimator == "laplace") policy = TauPolicy::laplace();
    else if (c.estimator == "kt") policy = TauPolicy::krichevsky_trofimov();
    else if (c.estimator == "perks") policy = TauPolicy::perks();
    else if (c.estimator == "minimax") policy = TauPolicy::minimax();
    else if (c.estimator == "stein") policy = TauPolicy::stein();
    const auto tau = resolve_tau(policy, g);
    if (tau.warning) report["warnings"].push_back(*tau.warning);
    p = smooth_vertex_pmf(g, policy);
    report["tau"] = p->tau();
  }
  report["estimator"] = c.estimator;
  report["source"] = to_string(p->source());
  Eigen::MatrixXd table(Eigen::Index(g.size()), 3);
  const double N = g.total_mass();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto r = Eigen::Index(i);
    table(r, 0) = g.degree(i);
    table(r, 1) = N > 0.0 ? g.degree(i) / N : 0.0;
    table(r, 2) = (*p)[i];
  }
  emit_table(run, report, c, "pmf", {"vertex", "degree", "mle", "smoothed"}, g.labels(), table);
  finish(run, std::move(report), c);
  return run;
}

RunOutput run_fetch(const RunConfig& c) {
  RunOutput run;
  FetchOptions options;
  options.data_dir = c.out;
  options.cache_dir = c.cache;
  options.offline = c.offline;
  const auto report = fetch_dataset(c.dataset, options);
  json files = json::array();
  for (const auto& f : report.files) files.push_back(f.string());
  run.summary = json{{"dataset", report.name}, {"files", files},       {"sha256", report.sha256},
                     {"checksum", report.checksum_status}, {"notes", report.notes}};
  if (report.rows) run.summary["rows"] = report.rows;
  if (report.vertices) {
    run.summary["vertices"] = report.vertices;
    run.summary["edges"] = report.edges;
  }
  return run;
}

}  // namespace

RunOutput execute(const RunConfig& config) {
  validate(config);
  const auto& s = config.subcommand;
  if (s == "grafield") return run_grafield(config);
  if (s == "spectrum") return run_spectrum(config);
  if (s == "embed") return run_embed(config);
  if (s == "cluster") return run_cluster(config);
  if (s == "regress") return run_regress(config);
  if (s == "smooth") return run_smooth(config);
  return run_fetch(config);
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::Validation: return kValidation;
      case ErrorKind::Data: return kData;
      case ErrorKind::Numerical: return kNumerical;
    }
  }
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e) || dynamic_cast<const std::ios_base::failure*>(&e) ||
      dynamic_cast<const nlohmann::json::exception*>(&e)) {
    return kData;
  }
  return kNumerical;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    RunOutput result = execute(config);
    const auto written = result.artifacts.commit(config.out);
    if (result.summary.is_null()) {
      json files = json::array();
      for (const auto& f : written) files.push_back(f.string());
      result.summary = json{{"files", files}};
    }
    out << result.summary.dump(2) << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace grafield::cli
