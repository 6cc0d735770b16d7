#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "invperc/io.hpp"

namespace invperc::cli {

inline constexpr const char* kVersion = "0.3.0";

// One simulation run: model, lattice, parameters, analyses, outputs.
// Serializes to a single JSON document; command-line flags override fields.
struct RunConfig {
  std::string model;  // interchange | corner | loopon | zoo
  std::string lattice_kind = "z2_window";
  std::vector<int> dims;

  double beta = 1.0;                 // interchange
  double p = 0.5, q = 0.5;           // corner
  double x = 1.0, n = 1.0;           // loop O(n)
  long sweeps = 1000;                // loop O(n)
  long sample_interval = 10;         // loop O(n)
  double lambda = 0.1;               // zoo
  std::string animal = "singleton";  // zoo

  std::uint64_t seed = 0;
  std::vector<std::string> analyses;
  std::string out;
  std::string format = "csv";  // csv | json
  int replicas = 1;
  int jobs = 1;
  bool emit_cycles = false;
  std::string save_path;    // optional saved-configuration base
  std::string render_path;  // optional SVG scene

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  // Completeness/range validation; returns the offending field.
  std::optional<std::string> validate() const;

  bool operator==(const RunConfig&) const = default;
};

struct ResultBundle {
  nlohmann::json header;  // config echo, seed, version, timestamp
  std::map<std::string, std::string> tables;  // name -> csv body
  nlohmann::json report;
  std::optional<std::string> scene;  // svg document

  // header + report as one json document
  nlohmann::json to_json() const;
};

// Runs the configured model (fanning replicas across jobs) and returns the
// merged bundle. Throws std::invalid_argument on bad configurations.
ResultBundle run(const RunConfig& cfg);

// Writes tables/report/scene under cfg.out (write-then-rename everywhere).
// Returns the list of paths written.
std::vector<std::string> persist(const ResultBundle& bundle, const RunConfig& cfg);

// Analysis over a saved configuration.
ResultBundle analyze(const io::SavedConfig& saved,
                     const std::vector<std::string>& analyses);

// SVG scene for a saved configuration.
std::string render_saved(const io::SavedConfig& saved, const std::string& style);

}  // namespace invperc::cli
