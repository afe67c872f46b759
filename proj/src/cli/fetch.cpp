#include <curl/curl.h>
#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "grafield/cli/datasets.hpp"
#include "grafield/cli/output.hpp"
#include "grafield/error.hpp"
#include "grafield/graph_io.hpp"

namespace grafield::cli {
namespace {

std::size_t collect(char* data, std::size_t size, std::size_t count, void* user) {
  static_cast<std::string*>(user)->append(data, size * count);
  return size * count;
}

std::string read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string manual_steps(const DatasetSource& src, const FetchOptions& options) {
  const std::string cache = options.cache_dir.empty() ? "<cache-dir>" : options.cache_dir.string();
  std::ostringstream msg;
  msg << "manual steps for '" << src.name << "':\n";
  if (!src.url.empty()) {
    msg << "  1. download " << src.url << "\n";
  } else {
    msg << "  1. obtain the " << src.name << " network in Pajek format (no pinned public URL is known)\n";
  }
  msg << "  2. save it as " << cache << "/" << src.cache_file << "\n";
  if (!src.companion.empty()) msg << "     and the partition as " << cache << "/" << src.companion << "\n";
  msg << "  3. rerun: grafield fetch " << src.name << " --cache " << cache;
  return msg.str();
}

// Returns the bytes and whether they came from the network.
std::pair<std::string, bool> obtain(const DatasetSource& src, const FetchOptions& options) {
  if (!options.cache_dir.empty()) {
    const auto cached = options.cache_dir / src.cache_file;
    if (std::filesystem::exists(cached)) return {read_binary(cached), false};
  }
  if (options.offline || src.url.empty()) {
    throw DataError(std::string(src.url.empty() ? "no download source" : "offline and nothing cached") + "; " +
                    manual_steps(src, options));
  }
  std::string bytes;
  try {
    bytes = http_get(src.url);
  } catch (const DataError& e) {
    throw DataError(std::string(e.what()) + "\n" + manual_steps(src, options));
  }
  return {std::move(bytes), true};
}

// Verifies against the pinned digest, or the lock file written on first use.
std::string verify(const DatasetSource& src, const std::string& digest, const FetchOptions& options) {
  if (!src.sha256.empty()) {
    if (digest != src.sha256) {
      throw DataError("checksum mismatch for " + src.name + ": expected " + src.sha256 + ", got " + digest);
    }
    return "pinned";
  }
  const auto lock_path = options.data_dir / "checksums.lock";
  nlohmann::json lock = nlohmann::json::object();
  if (std::filesystem::exists(lock_path)) lock = nlohmann::json::parse(read_binary(lock_path));
  if (lock.contains(src.name)) {
    const auto expected = lock[src.name].get<std::string>();
    if (expected != digest) {
      throw DataError("checksum mismatch for " + src.name + ": lock file records " + expected + ", got " + digest);
    }
    return "matched-lock";
  }
  lock[src.name] = digest;
  write_atomic(lock_path, lock.dump(2) + "\n");
  return "recorded";
}

std::string labels_csv(const Graph* g, const std::map<std::string, std::string>& labels) {
  std::ostringstream out;
  out << "vertex,label\n";
  if (g) {
    for (const auto& v : g->labels()) out << v << ',' << labels.at(v) << '\n';
  }
  for (const auto& [v, l] : labels) {
    if (!g || !g->index_of(v)) out << v << ',' << l << '\n';
  }
  return out.str();
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw DataError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string http_get(const std::string& url) {
  static std::once_flag init;
  std::call_once(init, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
  CURL* curl = curl_easy_init();
  if (!curl) throw DataError("libcurl initialisation failed");
  std::string body;
  std::array<char, CURL_ERROR_SIZE> err{};
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_CONNECTTIMEOUT, 20L);
  curl_easy_setopt(curl, CURLOPT_TIMEOUT, 120L);
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, collect);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
  curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, err.data());
  const CURLcode rc = curl_easy_perform(curl);
  curl_easy_cleanup(curl);
  if (rc != CURLE_OK) {
    throw DataError("download of " + url + " failed: " + (err[0] ? std::string(err.data()) : curl_easy_strerror(rc)));
  }
  return body;
}

FetchReport fetch_dataset(const std::string& name, const FetchOptions& options) {
  const DatasetSource& src = dataset_source(name);
  const auto [raw, downloaded] = obtain(src, options);

  FetchReport report;
  report.name = src.name;
  report.sha256 = sha256_hex(raw);
  report.checksum_status = verify(src, report.sha256, options);
  if (downloaded && !options.cache_dir.empty()) write_atomic(options.cache_dir / src.cache_file, raw);

  ArtifactSet files;
  if (src.format == SourceFormat::MeuseTable) {
    files.add(src.name + ".csv", convert_meuse(raw, &report.rows));
  } else {
    LabelledEdges parsed;
    if (src.format == SourceFormat::GmlZip) {
      std::istringstream in(zip_member(raw, src.member));
      parsed = parse_gml(in, src.label_attribute);
    } else {
      std::istringstream in(raw);
      parsed = parse_pajek(in);
      const auto companion = options.cache_dir / src.companion;
      if (!src.companion.empty() && std::filesystem::exists(companion)) {
        std::istringstream clu(read_binary(companion));
        const auto classes = parse_pajek_partition(clu);
        if (classes.size() != parsed.declared_vertices) throw DataError("partition size does not match the vertex count");
        for (std::size_t i = 0; i < classes.size(); ++i) {
          const auto it = parsed.labels.find(std::to_string(i + 1));
          if (it == parsed.labels.end()) throw DataError("Pajek vertices are not numbered 1..n");
          it->second = classes[i];
        }
        report.notes.push_back("labels taken from " + src.companion);
      }
    }
    if (parsed.directed) report.notes.push_back("directed source symmetrized as A + A^T (reciprocal arcs sum to weight 2)");
    report.notes.push_back("raw edge records: " + std::to_string(parsed.edges.size()));
    const Graph g = Graph::from_edges(parsed.edges);
    report.vertices = g.size();
    report.edges = g.edge_count();
    if (g.size() < parsed.declared_vertices) {
      report.notes.push_back(std::to_string(parsed.declared_vertices - g.size()) +
                             " declared vertices have no edges and are absent from the edge list");
    }
    std::ostringstream edges;
    io::write_edge_list(edges, g);
    files.add(src.name + ".edges", edges.str());
    const bool has_labels = std::any_of(parsed.labels.begin(), parsed.labels.end(), [](const auto& kv) { return !kv.second.empty(); });
    if (has_labels) {
      files.add(src.name + ".labels.csv", labels_csv(&g, parsed.labels));
    } else {
      report.notes.push_back("source carries no class labels");
    }
  }
  report.files = files.commit(options.data_dir);
  return report;
}

}  // namespace grafield::cli
