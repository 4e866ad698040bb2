#pragma once

// On-disk memo of XiTables keyed by an FNV-1a hash of the canonical spec and
// order. Writes go to a temporary file that is renamed into place.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "strange_lab/json_io.hpp"

namespace strange_lab {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Environment override first, then the supplied default.
inline std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("STRANGE_LAB_CACHE"); env && *env) return env;
  return fallback;
}

class XiCache {
 public:
  explicit XiCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  static std::string key(const StrangeSpec& spec, long M) {
    const json k{{"schema", xitable_schema}, {"spec", to_json(spec.normalized())}, {"order", M}};
    std::ostringstream os;
    os << std::hex << fnv1a(k.dump());
    return os.str();
  }

  std::filesystem::path path_for(const StrangeSpec& spec, long M) const { return dir_ / ("xi-" + key(spec, M) + ".json"); }

  /// Missing, unreadable, foreign-schema or mismatched entries all count as absent.
  std::optional<XiTable> load(const StrangeSpec& spec, long M) const {
    std::ifstream in(path_for(spec, M));
    if (!in) return std::nullopt;
    try {
      XiTable t = xitable_from_json(json::parse(in));
      if (!(t.spec == spec.normalized()) || t.M != M) return std::nullopt;
      return t;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void store(const XiTable& t) const {
    std::filesystem::create_directories(dir_);
    const auto final_path = path_for(t.spec, t.M);
    auto tmp = final_path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter_++);
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
      out << to_json(t).dump() << '\n';
      if (!out.flush()) throw std::runtime_error("cache: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path);
  }

  XiTable get_or_compute(const StrangeSpec& spec, long M) {
    if (auto hit = load(spec, M)) {
      ++hits_;
      return *hit;
    }
    ++misses_;
    XiTable t = xi_series(spec, M);
    store(t);
    return t;
  }

  /// Adapter for verify_family's provider argument.
  XiProvider provider() {
    return [this](const StrangeSpec& s, long M) { return get_or_compute(s, M); };
  }

  long hits() const { return hits_; }
  long misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  long hits_ = 0;
  long misses_ = 0;
  inline static std::atomic<long> counter_{0};
};

}  // namespace strange_lab
