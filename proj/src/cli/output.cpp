#include "grafield/cli/output.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "grafield/error.hpp"

namespace grafield::cli {
namespace {

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  return path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw DataError("write to " + path.string() + " failed");
}

}  // namespace

std::string library_version() {
#ifdef GRAFIELD_VERSION
  return GRAFIELD_VERSION;
#else
  return "unknown";
#endif
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buf.data(), ptr);
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::string>& row_names,
                      const Eigen::MatrixXd& values) {
  std::ostringstream out;
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    bool first = true;
    if (!row_names.empty()) {
      out << row_names.at(std::size_t(i));
      first = false;
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out << (first ? "" : ",") << format_number(values(i, j));
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json json_matrix(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json json_vector(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

nlohmann::json make_meta(const RunConfig& config) {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = std::time_t(std::strtoll(epoch, nullptr, 10));
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::array<char, 32> stamp{};
  std::strftime(stamp.data(), stamp.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return {{"config", config}, {"version", library_version()}, {"timestamp", std::string(stamp.data())}};
}

void ArtifactSet::add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

void ArtifactSet::add_json(std::string name, const nlohmann::json& j) { add(std::move(name), j.dump(2) + "\n"); }

std::vector<std::filesystem::path> ArtifactSet::commit(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> temps, finals;
  try {
    for (const auto& [name, content] : files_) {
      finals.push_back(dir / name);
      temps.push_back(temp_sibling(finals.back()));
      write_file(temps.back(), content);
    }
  } catch (...) {
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    throw;
  }
  // Files that already exist are set aside first so a failure halfway can
  // restore the directory to its previous state.
  std::vector<std::filesystem::path> backups(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    ec.clear();
    if (std::filesystem::is_regular_file(finals[i], ec)) {
      backups[i] = temp_sibling(finals[i]).string() + ".old";
      std::filesystem::rename(finals[i], backups[i], ec);
      if (ec) backups[i].clear();
    } else {
      ec.clear();
    }
    if (!ec) std::filesystem::rename(temps[i], finals[i], ec);
    if (ec) {
      const std::string reason = ec.message();
      for (std::size_t j = 0; j < temps.size(); ++j) {
        std::error_code ignore;
        if (j < i) std::filesystem::remove(finals[j], ignore);
        std::filesystem::remove(temps[j], ignore);
        if (j <= i && !backups[j].empty()) std::filesystem::rename(backups[j], finals[j], ignore);
      }
      throw DataError("cannot move output into place at " + finals[i].string() + ": " + reason);
    }
  }
  for (const auto& b : backups) {
    if (!b.empty()) std::filesystem::remove(b, ec);
  }
  return finals;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto temp = temp_sibling(path);
  try {
    write_file(temp, content);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(temp, ec);
    throw;
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw DataError("cannot move output into place at " + path.string());
  }
}

}  // namespace grafield::cli
