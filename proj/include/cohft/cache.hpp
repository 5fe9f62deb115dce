#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace cohft {

// File cache with atomic write-then-rename. Callers treat unparsable
// payloads as misses and recompute; entries are never trusted blindly.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& payload) const;
  std::filesystem::path path_for(const std::string& key) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace cohft
