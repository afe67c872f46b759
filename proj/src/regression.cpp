#include "grafield/regression.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "grafield/error.hpp"

namespace grafield {
namespace {

std::string trim(std::string s) {
  const auto keep = [](unsigned char c) { return !std::isspace(c) && c != '"'; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), keep));
  s.erase(std::find_if(s.rbegin(), s.rend(), keep).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DataError("line " + std::to_string(line) + ": column '" + column + "' value '" + text + "' is not a number");
  }
  return v;
}

double distance(const Eigen::MatrixXd& c, Eigen::Index i, Eigen::Index j) { return (c.row(i) - c.row(j)).norm(); }

void check_coords(const Eigen::MatrixXd& coords) {
  if (coords.cols() != 2) throw ValidationError("coordinates must have two columns");
  if (coords.rows() < 2) throw ValidationError("a spatial graph needs at least two points");
  if (!coords.allFinite()) throw ValidationError("coordinates contain non-finite values");
}

// Categorical columns become indicators for every level except the smallest.
void expand_categorical(const SpatialDataset& data, Eigen::MatrixXd& X, std::vector<std::string>& names) {
  std::vector<Eigen::VectorXd> cols;
  names.clear();
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
    if (!data.categorical[std::size_t(j)]) {
      cols.push_back(data.X.col(j));
      names.push_back(data.names[std::size_t(j)]);
      continue;
    }
    const std::set<double> levels(data.X.col(j).begin(), data.X.col(j).end());
    for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
      cols.push_back((data.X.col(j).array() == *it).cast<double>());
      std::ostringstream name;
      name << data.names[std::size_t(j)] << '=' << *it;
      names.push_back(name.str());
    }
  }
  X.resize(data.X.rows(), Eigen::Index(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) X.col(Eigen::Index(c)) = cols[c];
}

}  // namespace

SpatialDataset parse_spatial_csv(std::istream& in, const SpatialColumns& columns) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw DataError("table is empty");
  auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("table has no column '" + name + "'");
    return std::size_t(it - header.begin());
  };
  const std::size_t cx = find(columns.x), cy = find(columns.y), cr = find(columns.response);
  std::vector<std::size_t> cc;
  for (const auto& name : columns.covariates) cc.push_back(find(name));

  std::vector<std::array<double, 2>> coords;
  std::vector<double> y;
  std::vector<std::vector<double>> x;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    }
    coords.push_back({parse_number(cells[cx], line_no, columns.x), parse_number(cells[cy], line_no, columns.y)});
    y.push_back(parse_number(cells[cr], line_no, columns.response));
    std::vector<double> row;
    for (std::size_t j = 0; j < cc.size(); ++j) row.push_back(parse_number(cells[cc[j]], line_no, columns.covariates[j]));
    x.push_back(std::move(row));
  }
  if (y.empty()) throw DataError("table has a header but no rows");

  SpatialDataset data;
  const auto n = Eigen::Index(y.size());
  data.coords.resize(n, 2);
  data.y.resize(n);
  data.X.resize(n, Eigen::Index(cc.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    data.coords(i, 0) = coords[std::size_t(i)][0];
    data.coords(i, 1) = coords[std::size_t(i)][1];
    data.y[i] = y[std::size_t(i)];
    for (std::size_t j = 0; j < cc.size(); ++j) data.X(i, Eigen::Index(j)) = x[std::size_t(i)][j];
  }
  data.names = columns.covariates;
  for (const auto& name : columns.covariates) {
    data.categorical.push_back(std::find(columns.categorical.begin(), columns.categorical.end(), name) !=
                               columns.categorical.end());
  }
  data.response = columns.response;
  coverage_radius(data.coords);  // rejects coincident points
  return data;
}

SpatialDataset read_spatial_csv(const std::filesystem::path& path, const SpatialColumns& columns) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_spatial_csv(in, columns);
}

double coverage_radius(const Eigen::MatrixXd& coords) {
  check_coords(coords);
  const auto n = coords.rows();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, distance(coords, i, j));
    }
    if (nearest <= 1e-9) {
      throw ValidationError("points " + std::to_string(i + 1) + " and another location coincide; remove duplicate coordinates");
    }
    radius = std::max(radius, nearest);
  }
  return radius;
}

Graph build_spatial_graph(const Eigen::MatrixXd& coords, EdgeWeighting weighting) {
  const double r = coverage_radius(coords);
  const auto n = coords.rows();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = distance(coords, i, j);
      if (d > r) continue;
      const double w = weighting == EdgeWeighting::Binary ? 1.0 : std::exp(-d * d / (2.0 * r * r));
      A(i, j) = A(j, i) = w;
    }
  }
  return Graph::from_dense(A);
}

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& fitted) {
  if (y.size() != fitted.size() || y.size() == 0) throw ValidationError("r_squared needs equal, nonempty vectors");
  const double sst = (y.array() - y.mean()).square().sum();
  if (sst == 0.0) throw ValidationError("response is constant; R^2 is undefined");
  return 1.0 - (y - fitted).squaredNorm() / sst;
}

RegressionFit spectral_regression(const SpatialDataset& data, const RegressionOptions& options) {
  const auto n = data.size();
  if (data.coords.rows() != Eigen::Index(n) || data.X.rows() != Eigen::Index(n) ||
      data.categorical.size() != std::size_t(data.X.cols()) || data.names.size() != std::size_t(data.X.cols())) {
    throw ValidationError("dataset parts disagree in size");
  }
  RegressionFit fit;

  Eigen::VectorXd y = data.y;
  if (options.log_y) {
    if ((y.array() <= 0.0).any()) throw ValidationError("log response needs strictly positive values");
    y = y.array().log();
  }

  Eigen::MatrixXd X;
  std::vector<std::string> x_names;
  if (options.one_hot) {
    expand_categorical(data, X, x_names);
  } else {
    X = data.X;
    x_names = data.names;
  }

  const Graph g = build_spatial_graph(data.coords, options.weighting);
  fit.radius = coverage_radius(data.coords);
  fit.minimax_tau = std::sqrt(g.total_mass()) / double(n);

  Eigen::MatrixXd design = X;
  std::vector<std::string> names = x_names;
  if (options.k > 0) {
    if (options.k > n - 1) {
      throw ValidationError("k = " + std::to_string(options.k) + " exceeds the " + std::to_string(n - 1) +
                            " nontrivial basis vectors of a " + std::to_string(n) + "-point graph");
    }
    OperatorParams params;
    if (options.kind == OperatorKind::RegLaplacianI || options.kind == OperatorKind::RegLaplacianII) {
      const auto resolved = resolve_tau(options.tau, g);
      if (resolved.warning) fit.warnings.push_back(*resolved.warning);
      params.tau = resolved.value;
    }
    fit.tau = params.tau;
    const auto dec = graph_spectrum(g, options.kind, params, options.k, options.solver);
    for (const auto& w : dec.warnings) fit.warnings.push_back(w);
    fit.phi = dec.phi;
    fit.eigenvalues = dec.eigenvalues;
    design.resize(Eigen::Index(n), dec.phi.cols() + X.cols());
    design << dec.phi, X;
    names.clear();
    for (Eigen::Index c = 0; c < dec.phi.cols(); ++c) names.push_back("phi" + std::to_string(c + 1));
    names.insert(names.end(), x_names.begin(), x_names.end());
  }

  // Drop constant columns; they carry no information beside the intercept.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if ((design.col(j).array() == design(0, j)).all()) {
      fit.warnings.push_back("column '" + names[std::size_t(j)] + "' is constant and was dropped");
    } else {
      kept.push_back(j);
    }
  }
  Eigen::MatrixXd used(Eigen::Index(n), Eigen::Index(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    used.col(Eigen::Index(c)) = design.col(kept[c]);
    fit.names.push_back(names[std::size_t(kept[c])]);
  }

  CrossValidationOptions cv = options.cv;
  if (options.lambda) cv.lambdas = {*options.lambda};
  const LassoPath path = lasso_cross_validate(used, y, options.lasso, cv);
  fit.lambda = path.lambdas[path.best];

  const LassoFit lasso = lasso_solve(used, y, fit.lambda, options.lasso);
  if (!lasso.converged) fit.warnings.push_back("coordinate descent hit the sweep limit before converging");
  fit.beta = lasso.beta;
  fit.intercept = lasso.intercept;
  fit.objective = lasso.objective;
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    if (fit.beta[j] != 0.0) fit.selected.push_back(std::size_t(j));
  }
  const Eigen::VectorXd fitted = (used * fit.beta).array() + fit.intercept;
  fit.r2 = r_squared(y, fitted);
  fit.r2_cv = r_squared(y, path.cv_predictions);
  return fit;
}

}  // namespace grafield
