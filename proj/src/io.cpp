#include "invperc/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace invperc::io {

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("atomic_write: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("atomic_write: rename failed for " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void save_config(const std::string& base, const nlohmann::json& header,
                 const std::vector<char>& bits) {
  nlohmann::json h = header;
  h["format"] = "invperc-config";
  h["format_version"] = 1;
  h["bit_count"] = bits.size();

  std::string packed((bits.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) packed[i / 8] |= static_cast<char>(1 << (i % 8));

  atomic_write(base + ".json", h.dump(2) + "\n");
  atomic_write(base + ".bits", packed);
}

SavedConfig load_config(const std::string& base) {
  SavedConfig cfg;
  cfg.header = nlohmann::json::parse(read_file(base + ".json"));
  if (cfg.header.value("format", "") != "invperc-config")
    throw std::runtime_error("load_config: not an invperc configuration: " + base);
  std::size_t n = cfg.header.at("bit_count").get<std::size_t>();
  std::string packed = read_file(base + ".bits");
  if (packed.size() != (n + 7) / 8)
    throw std::runtime_error("load_config: payload size mismatch for " + base);
  cfg.bits.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    cfg.bits[i] = (packed[i / 8] >> (i % 8)) & 1;
  return cfg;
}

Csv::Csv(std::vector<std::string> columns) : width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ",";
    body_ += columns[i];
  }
  body_ += "\n";
}

void Csv::row(const std::vector<std::string>& values) {
  if (values.size() != width_) throw std::invalid_argument("Csv::row: width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ",";
    body_ += values[i];
  }
  body_ += "\n";
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace invperc::io
