#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "hetrec/errors.hpp"
#include "hetrec/version.hpp"

namespace hetrec {

inline std::string sha256_hex(const void* data, std::size_t len) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (EVP_Digest(data, len, digest, &digest_len, EVP_sha256(), nullptr) != 1)
    throw ComputeError("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(digest_len * 2);
  for (unsigned int i = 0; i < digest_len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

inline std::string sha256_hex(const std::string& data) { return sha256_hex(data.data(), data.size()); }

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw ComputeError("sha256 context allocation failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_DigestFinal_ex(ctx, digest, &digest_len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < digest_len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

/// Writes via a temp file and rename so consumers never observe partial files.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + tmp.string());
    out << content;
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// Reproducibility sidecar written next to every output set. The hashes of
/// inputs and outputs identify a run; timings are informational only.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string dataset_hash;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> outputs;     // file name -> sha256
  std::map<std::string, std::int64_t> timings_ms; // phase -> duration

  nlohmann::json to_json() const {
    return {{"tool_version", std::string(kVersion)},
            {"command", command},
            {"config_hash", config_hash},
            {"dataset_hash", dataset_hash},
            {"seeds", seeds},
            {"outputs", outputs},
            {"timings_ms", timings_ms}};
  }

  void write(const std::filesystem::path& path) const {
    write_file_atomic(path, to_json().dump(2) + "\n");
  }
};

}  // namespace hetrec
