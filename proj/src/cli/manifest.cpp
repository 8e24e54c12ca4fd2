#include <fstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "mcflab/cli.hpp"

namespace mcflab::cli {

using nlohmann::json;

std::string sha256_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFound("cannot hash missing file " + p.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

void write_manifest(const fs::path& dir, const std::string& config_json, const std::vector<std::string>& files,
                    double wall_seconds) {
  json j;
  j["version"] = kVersion;
  j["config"] = json::parse(config_json);
  j["wall_time_s"] = wall_seconds;
  j["files"] = json::array();
  for (const auto& f : files)
    j["files"].push_back({{"path", f}, {"sha256", sha256_file(dir / f)}, {"bytes", fs::file_size(dir / f)}});
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << j.dump(2) << "\n";
}

bool verify_manifest(const fs::path& dir, std::string* why) {
  std::ifstream in(dir / "manifest.json");
  if (!in) {
    if (why) *why = "no manifest.json";
    return false;
  }
  json j;
  in >> j;
  for (const auto& f : j.at("files")) {
    const fs::path p = dir / f.at("path").get<std::string>();
    if (!fs::exists(p)) {
      if (why) *why = "missing " + p.string();
      return false;
    }
    if (sha256_file(p) != f.at("sha256").get<std::string>()) {
      if (why) *why = "hash mismatch for " + p.string();
      return false;
    }
  }
  return true;
}

}  // namespace mcflab::cli
