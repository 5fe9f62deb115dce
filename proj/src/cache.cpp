#include "cohft/cache.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cohft {

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path Cache::path_for(const std::string& key) const {
  std::string safe;
  for (char c : key)
    safe.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_');
  return dir_ / (safe + ".json");
}

std::optional<std::string> Cache::get(const std::string& key) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) return std::nullopt;
  return buffer.str();
}

void Cache::put(const std::string& key, const std::string& payload) const {
  auto target = path_for(key);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache directory is not writable: " + dir_.string());
    out << payload;
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace cohft
