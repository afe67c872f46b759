#include <zlib.h>

#include <cstdint>
#include <cstring>

#include "grafield/cli/datasets.hpp"
#include "grafield/error.hpp"

namespace grafield::cli {
namespace {

constexpr std::uint32_t kEndOfCentralDir = 0x06054b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kLocalHeader = 0x04034b50;

std::uint32_t read_u16(const std::string& s, std::size_t at) {
  if (at + 2 > s.size()) throw DataError("zip archive is truncated");
  return std::uint32_t(std::uint8_t(s[at])) | std::uint32_t(std::uint8_t(s[at + 1])) << 8;
}

std::uint32_t read_u32(const std::string& s, std::size_t at) { return read_u16(s, at) | read_u16(s, at + 2) << 16; }

struct Entry {
  std::string name;
  std::uint32_t method, crc, compressed, size, local_offset;
};

std::vector<Entry> central_directory(const std::string& zip) {
  if (zip.size() < 22) throw DataError("not a zip archive (too short)");
  std::size_t eocd = std::string::npos;
  for (std::size_t i = zip.size() - 22 + 1; i-- > 0 && zip.size() - i <= 22 + 0xffff;) {
    if (read_u32(zip, i) == kEndOfCentralDir) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos) throw DataError("not a zip archive (no end-of-directory record)");
  const std::uint32_t count = read_u16(zip, eocd + 10);
  std::size_t at = read_u32(zip, eocd + 16);
  std::vector<Entry> out;
  for (std::uint32_t e = 0; e < count; ++e) {
    if (read_u32(zip, at) != kCentralHeader) throw DataError("zip central directory is corrupt");
    Entry entry;
    entry.method = read_u16(zip, at + 10);
    entry.crc = read_u32(zip, at + 16);
    entry.compressed = read_u32(zip, at + 20);
    entry.size = read_u32(zip, at + 24);
    const std::uint32_t name_len = read_u16(zip, at + 28);
    const std::uint32_t extra_len = read_u16(zip, at + 30);
    const std::uint32_t comment_len = read_u16(zip, at + 32);
    entry.local_offset = read_u32(zip, at + 42);
    if (at + 46 + name_len > zip.size()) throw DataError("zip archive is truncated");
    entry.name = zip.substr(at + 46, name_len);
    out.push_back(std::move(entry));
    at += 46 + name_len + extra_len + comment_len;
  }
  return out;
}

std::string inflate_raw(const std::string& data, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw DataError("zlib initialisation failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = uInt(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = uInt(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) throw DataError("zip member failed to decompress");
  return out;
}

}  // namespace

std::vector<std::string> zip_members(const std::string& archive) {
  std::vector<std::string> names;
  for (const auto& e : central_directory(archive)) names.push_back(e.name);
  return names;
}

std::string zip_member(const std::string& archive, const std::string& member) {
  for (const auto& e : central_directory(archive)) {
    if (e.name != member) continue;
    const std::size_t at = e.local_offset;
    if (read_u32(archive, at) != kLocalHeader) throw DataError("zip local header for " + member + " is corrupt");
    const std::size_t data_at = at + 30 + read_u16(archive, at + 26) + read_u16(archive, at + 28);
    if (data_at + e.compressed > archive.size()) throw DataError("zip archive is truncated");
    const std::string raw = archive.substr(data_at, e.compressed);
    std::string content;
    if (e.method == 0) {
      content = raw;
    } else if (e.method == 8) {
      content = inflate_raw(raw, e.size);
    } else {
      throw DataError("zip member " + member + " uses unsupported compression method " + std::to_string(e.method));
    }
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(content.data()), uInt(content.size()));
    if (crc != e.crc) throw DataError("zip member " + member + " fails its CRC check");
    return content;
  }
  throw DataError("zip archive has no member '" + member + "'");
}

}  // namespace grafield::cli
