#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace onebit::cli {

/// Bad configuration or flags; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Typed, strict view over a JSON config object. Every read records the key
/// (and its effective value, defaults included); finish() rejects anything
/// that was never read.
class ConfigReader {
public:
  explicit ConfigReader(nlohmann::json doc) : doc_(std::move(doc)) {
    if (doc_.is_null()) doc_ = nlohmann::json::object();
    if (!doc_.is_object()) throw ConfigError("config: top level must be a JSON object");
  }

  static ConfigReader from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    try {
      return ConfigReader(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    T value = fallback;
    if (doc_.contains(key)) {
      try {
        value = doc_.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: key '" + key + "' has the wrong type");
      }
    }
    effective_[key] = value;
    return value;
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  /// Overrides a value (e.g. from a command-line flag) in the effective echo.
  template <typename T>
  void set_effective(const std::string& key, const T& value) {
    seen_.insert(key);
    effective_[key] = value;
  }

  void finish() const {
    for (const auto& [key, _] : doc_.items())
      if (!seen_.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }

  const nlohmann::json& effective() const { return effective_; }

private:
  nlohmann::json doc_;
  nlohmann::json effective_ = nlohmann::json::object();
  std::set<std::string> seen_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError("config: " + message);
}

} // namespace onebit::cli
