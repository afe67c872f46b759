#include "grafield/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "grafield/error.hpp"
#include "grafield/spectral.hpp"

namespace grafield::cli {

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"subcommand", c.subcommand},
                     {"input", c.input},
                     {"labels", c.labels},
                     {"operator", c.op},
                     {"route", c.route},
                     {"tau", c.tau},
                     {"alpha", c.alpha},
                     {"k", c.k},
                     {"top", c.top},
                     {"t", c.t},
                     {"embedding", c.embedding},
                     {"estimator", c.estimator},
                     {"lambda", c.lambda},
                     {"log_y", c.log_y},
                     {"one_hot", c.one_hot},
                     {"gaussian_edges", c.gaussian_edges},
                     {"row_normalize", c.row_normalize},
                     {"full_dimension", c.full_dimension},
                     {"largest_component", c.largest_component},
                     {"signal", c.signal},
                     {"unweighted_gft", c.unweighted_gft},
                     {"restarts", c.restarts},
                     {"seed", c.seed},
                     {"format", c.format},
                     {"out", c.out},
                     {"dataset", c.dataset},
                     {"cache", c.cache},
                     {"offline", c.offline}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  const RunConfig d;
  c.subcommand = j.value("subcommand", d.subcommand);
  c.input = j.value("input", d.input);
  c.labels = j.value("labels", d.labels);
  c.op = j.value("operator", d.op);
  c.route = j.value("route", d.route);
  c.tau = j.value("tau", d.tau);
  c.alpha = j.value("alpha", d.alpha);
  c.k = j.value("k", d.k);
  c.top = j.value("top", d.top);
  c.t = j.value("t", d.t);
  c.embedding = j.value("embedding", d.embedding);
  c.estimator = j.value("estimator", d.estimator);
  c.lambda = j.value("lambda", d.lambda);
  c.log_y = j.value("log_y", d.log_y);
  c.one_hot = j.value("one_hot", d.one_hot);
  c.gaussian_edges = j.value("gaussian_edges", d.gaussian_edges);
  c.row_normalize = j.value("row_normalize", d.row_normalize);
  c.full_dimension = j.value("full_dimension", d.full_dimension);
  c.largest_component = j.value("largest_component", d.largest_component);
  c.signal = j.value("signal", d.signal);
  c.unweighted_gft = j.value("unweighted_gft", d.unweighted_gft);
  c.restarts = j.value("restarts", d.restarts);
  c.seed = j.value("seed", d.seed);
  c.format = j.value("format", d.format);
  c.out = j.value("out", d.out);
  c.dataset = j.value("dataset", d.dataset);
  c.cache = j.value("cache", d.cache);
  c.offline = j.value("offline", d.offline);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.contains("meta") && j["meta"].contains("config")) j = j["meta"]["config"];
  try {
    return j.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
}

TauPolicy parse_tau(const std::string& text) {
  if (text == "laplace") return TauPolicy::laplace();
  if (text == "kt") return TauPolicy::krichevsky_trofimov();
  if (text == "perks") return TauPolicy::perks();
  if (text == "minimax") return TauPolicy::minimax();
  if (text == "stein") return TauPolicy::stein();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError("--tau must be a number >= 0 or one of laplace, kt, perks, minimax, stein (got '" + text + "')");
  }
  return TauPolicy::fixed(v);
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> subcommands{"grafield", "spectrum", "embed", "cluster", "regress", "smooth", "fetch"};
  if (std::find(subcommands.begin(), subcommands.end(), c.subcommand) == subcommands.end()) {
    throw ValidationError("unknown subcommand '" + c.subcommand + "'");
  }
  if (c.format != "csv" && c.format != "json") throw ValidationError("--format must be csv or json");
  if (!parse_operator(c.op)) {
    throw ValidationError("unknown operator '" + c.op + "'; choose laplacian, centered, modularity, rw, reg1, reg2 or pagerank");
  }
  if (c.route != "gmatrix" && c.route != "operator") throw ValidationError("--route must be gmatrix or operator");
  if (c.embedding != "diffusion" && c.embedding != "kl") throw ValidationError("--embedding must be diffusion or kl");
  static const std::vector<std::string> estimators{"mle", "laplace", "kt", "perks", "minimax", "stein", "good-turing"};
  if (std::find(estimators.begin(), estimators.end(), c.estimator) == estimators.end()) {
    throw ValidationError("--estimator must be one of mle, laplace, kt, perks, minimax, stein, good-turing");
  }
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ValidationError("--alpha must lie in [0, 1]");
  parse_tau(c.tau);
  if (c.subcommand != "fetch" && c.input.empty()) throw ValidationError(c.subcommand + " needs an input file");
  if (c.subcommand == "fetch" && c.dataset.empty()) throw ValidationError("fetch needs a dataset name");
  if (c.subcommand == "cluster" && c.k < 2) throw ValidationError("cluster needs --k >= 2");
  if (c.restarts == 0) throw ValidationError("--restarts must be positive");
}

}  // namespace grafield::cli
