#include <CLI11.hpp>
#include <cstring>
#include <iostream>

#include "grafield/cli/run.hpp"
#include "grafield/simd/kernels.hpp"

namespace {

using grafield::cli::RunConfig;

void graph_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("input", c.input, "Edge list or Matrix Market file");
}

void operator_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--operator", c.op, "laplacian, centered, modularity, rw, reg1, reg2, pagerank");
  sub->add_option("--tau", c.tau, "Smoothing constant: number or laplace|kt|perks|minimax|stein");
  sub->add_option("--alpha", c.alpha, "PageRank teleport probability");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  bool from_config = false;
  // A config file provides the starting values; flags on the command line
  // override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0) {
      try {
        c = grafield::cli::load_config(argv[i + 1]);
        from_config = true;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return grafield::cli::exit_code_for(e);
      }
    }
  }

  CLI::App app{"Spectral graph analysis on the GraField kernel"};
  app.set_version_flag("--version", grafield::cli::library_version());
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON run config (or a previous report)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "Seed for every randomized step");
  app.add_option("--out", c.out, "Output directory (data directory for fetch)");
  bool show_isa = false;
  app.add_flag("--isa", show_isa, "Print the selected SIMD kernel set and exit");

  auto* grafield_cmd = app.add_subcommand("grafield", "GraField density matrix and entropy");
  graph_options(grafield_cmd, c);
  grafield_cmd->add_option("--tau", c.tau, "Smooth both mass functions with this tau");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and vertex basis of a shift operator");
  graph_options(spectrum, c);
  operator_options(spectrum, c);
  spectrum->add_option("--top", c.top, "Number of nontrivial pairs (0 = all)");
  spectrum->add_option("--route", c.route, "gmatrix or operator");
  spectrum->add_option("--signal", c.signal, "CSV vertex,value to transform");
  spectrum->add_flag("--unweighted", c.unweighted_gft, "Transform without vertex-mass weights");

  auto* embed = app.add_subcommand("embed", "Diffusion or Karhunen-Loeve coordinates");
  graph_options(embed, c);
  operator_options(embed, c);
  embed->add_option("--k", c.k, "Number of coordinates (0 = all)");
  embed->add_option("--t", c.t, "Diffusion time");
  embed->add_option("--embedding", c.embedding, "diffusion or kl");

  auto* cluster = app.add_subcommand("cluster", "Spectral community detection");
  graph_options(cluster, c);
  operator_options(cluster, c);
  cluster->add_option("--k", c.k, "Number of clusters");
  cluster->add_option("--labels", c.labels, "Ground truth CSV vertex,label");
  cluster->add_option("--restarts", c.restarts, "k-means restarts");
  cluster->add_flag("--row-normalize", c.row_normalize, "Scale embedded rows to unit length");
  cluster->add_flag("--full-dimension", c.full_dimension, "Embed in k instead of k-1 dimensions");
  cluster->add_flag("--largest-component", c.largest_component, "Restrict to the largest connected component");

  auto* regress = app.add_subcommand("regress", "Graph-basis lasso regression on spatial data");
  regress->add_option("--data", c.input, "CSV with columns x,y,zinc,ffreq,dist,soil");
  operator_options(regress, c);
  auto* k_opt = regress->add_option("--k", c.k, "Number of graph basis columns (default 25)");
  regress->add_option("--lambda", c.lambda, "auto or a penalty value");
  regress->add_flag("--log-y", c.log_y, "Regress the log of the response");
  regress->add_flag("--one-hot", c.one_hot, "Indicator columns for categorical covariates");
  regress->add_flag("--gaussian-edges", c.gaussian_edges, "Gaussian edge weights instead of binary");

  auto* smooth = app.add_subcommand("smooth", "Smoothed vertex mass function");
  graph_options(smooth, c);
  smooth->add_option("--estimator", c.estimator, "mle, laplace, kt, perks, minimax, stein or good-turing");
  smooth->add_option("--tau", c.tau, "Override the estimator's tau");

  auto* fetch = app.add_subcommand("fetch", "Download and convert a benchmark dataset");
  fetch->add_option("dataset", c.dataset, "polblogs, football, karate, mexican, adjnoun or meuse");
  fetch->add_option("--cache", c.cache, "Directory holding (or receiving) raw downloads");
  fetch->add_flag("--offline", c.offline, "Never use the network");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : grafield::cli::kValidation;
  }

  if (show_isa) {
    std::cout << grafield::simd::isa_name(grafield::simd::active().isa) << '\n';
    return 0;
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  if (c.subcommand.empty()) {
    std::cerr << app.help();
    return grafield::cli::kValidation;
  }
  if (c.subcommand == "regress" && !from_config && k_opt->count() == 0) c.k = 25;
  return grafield::cli::run(c, std::cout, std::cerr);
}
