#pragma once

#include <string>

#include <json.hpp>

#include "rtnoise/markov.hpp"
#include "rtnoise/operators.hpp"
#include "rtnoise/pulse.hpp"

namespace rtnoise {

inline constexpr const char* kVersion = "0.1.0";

/// Matrices travel as row-major nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json pulse_to_json(const ControlPulse& pulse);
ControlPulse pulse_from_json(const nlohmann::json& j);

/// {rates: [[...]], control: matrix, states: [{delta_h: matrix}, ...]}
nlohmann::json noise_model_to_json(const MarkovNoiseModel& model);
MarkovNoiseModel noise_model_from_json(const nlohmann::json& j);

/// CSV writer that prefixes '#'-comment lines carrying the resolved
/// configuration and artifact version, so every output is reproducible.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const nlohmann::json& resolved_config);
  ~CsvWriter();

  void header(const std::string& line);
  void row(const std::string& line);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace rtnoise
