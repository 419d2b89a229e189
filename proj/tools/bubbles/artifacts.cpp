#include "artifacts.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <openssl/evp.h>

#include "bubbles/error.hpp"
#include "bubbles/rng.hpp"

namespace bubbles::cli {

namespace {
bool g_quiet = false;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::internal, "SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    const auto got = in.gcount();
    if (got > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(got));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::string hex;
  hex.reserve(2 * length);
  char pair[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(pair, sizeof pair, "%02x", digest[i]);
    hex += pair;
  }
  return hex;
}

Series read_series(const fs::path& path, const std::string& flag, const std::string& date_column,
                   const std::string& value_column) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::io, flag + ": file not found: " + path.string());
  }
  return ingest_csv(path, date_column, value_column);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_series(const fs::path& path, const Series& x) { write_csv(x, path); }

Manifest::Manifest(std::string command) {
  doc_["command"] = std::move(command);
  doc_["tool_version"] = BUBBLES_VERSION;
  doc_["generator"] = std::string(kGeneratorId);
  doc_["parameters"] = nlohmann::json::object();
  doc_["inputs"] = nlohmann::json::object();
}

void Manifest::input(const std::string& role, const fs::path& path) {
  doc_["inputs"][role] = {{"path", path.generic_string()}, {"sha256", sha256_file(path)}};
}

void Manifest::artifact(const fs::path& relative) { artifacts_.push_back(relative.generic_string()); }

void Manifest::note(const std::string& text) { notes_.push_back(text); }

void Manifest::write(const fs::path& dir) {
  auto doc = doc_;
  auto files = artifacts_;
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  doc["artifacts"] = files;
  doc["notes"] = notes_;
  write_json(dir / "manifest.json", doc);
}

void progress(const std::string& text) {
  if (!g_quiet) std::cerr << text << '\n';
}

void set_quiet(bool quiet) { g_quiet = quiet; }

}  // namespace bubbles::cli
