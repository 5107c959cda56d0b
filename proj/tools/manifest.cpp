#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "corrard/errors.hpp"

namespace corrard::cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialization failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char byte[3];
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

using nlohmann::json;

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& path : m.inputs) {
    json digest = nullptr;
    try {
      digest = sha256_file(path);
    } catch (const Error&) {
    }
    inputs.push_back({{"path", path}, {"sha256", digest}});
  }
  nlohmann::json doc;
  doc["tool"] = "corrard";
  doc["version"] = CORRARD_VERSION;
  doc["command"] = m.command;
  doc["argv"] = m.argv;
  doc["config"] = m.config;
  doc["config_text"] = m.config_text;
  doc["master_seed"] = m.master_seed;
  doc["seed_source"] = m.seed_source;
  doc["inputs"] = inputs;
  doc["outputs"] = m.outputs;
  doc["details"] = m.details;
  doc["started_utc"] = m.started_utc;
  doc["finished_utc"] = m.finished_utc;
  doc["exit_code"] = m.exit_code;
  doc["error"] = m.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.error);
  return doc;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest '" + path + "'");
  out << manifest_to_json(m).dump(2) << '\n';
}

}  // namespace corrard::cli
