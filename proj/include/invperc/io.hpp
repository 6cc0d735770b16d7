#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace invperc::io {

// Write-then-rename; partial outputs never appear at the final path.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Compact binary bitset with a JSON sidecar header: <base>.json holds the
// metadata (including bit_count), <base>.bits the packed payload.
struct SavedConfig {
  nlohmann::json header;
  std::vector<char> bits;
};

void save_config(const std::string& base, const nlohmann::json& header,
                 const std::vector<char>& bits);
SavedConfig load_config(const std::string& base);

// Minimal CSV assembly; bodies are deterministic given the rows.
class Csv {
 public:
  explicit Csv(std::vector<std::string> columns);
  void row(const std::vector<std::string>& values);
  const std::string& body() const { return body_; }

 private:
  std::size_t width_;
  std::string body_;
};

std::string fmt_double(double v);

}  // namespace invperc::io
