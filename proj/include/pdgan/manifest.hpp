#pragma once

// Run manifests: the resolved configuration plus FNV-1a checksums of
// every file a run wrote.  Replaying a manifest re-runs the command from
// the stored configuration and must reproduce the checksums bit for bit.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace pdgan {

inline std::uint64_t fnv1a64(const char* data, size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h = fnv1a64(buf, static_cast<size_t>(in.gcount()), h);
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::map<std::string, std::string> checksums;  // file name -> fnv1a64 hex

  nlohmann::json to_json() const {
    return nlohmann::json{
        {"command", command}, {"config", config}, {"checksums", checksums}};
  }

  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    if (j.contains("checksums"))
      m.checksums = j.at("checksums").get<std::map<std::string, std::string>>();
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << to_json().dump(2) << '\n';
  }

  static RunManifest load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read manifest: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

}  // namespace pdgan
