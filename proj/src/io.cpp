#include "rtnoise/io.hpp"

#include <fstream>

namespace rtnoise {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw std::invalid_argument("matrix JSON must be a nested array");
  }
  const auto rows = j.size();
  const auto cols = j.front().size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw std::invalid_argument("ragged matrix JSON");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& entry = j[i][k];
      if (!entry.is_array() || entry.size() != 2) {
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

nlohmann::json pulse_to_json(const ControlPulse& pulse) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : pulse.segments) {
    segs.push_back({{"duration", s.duration}, {"amplitude", s.amplitude}});
  }
  return {{"a_max", pulse.a_max}, {"segments", std::move(segs)}};
}

ControlPulse pulse_from_json(const nlohmann::json& j) {
  ControlPulse pulse;
  pulse.a_max = j.value("a_max", 1.0);
  for (const auto& s : j.at("segments")) {
    pulse.segments.push_back({s.at("duration").get<double>(), s.at("amplitude").get<double>()});
  }
  pulse.validate();
  return pulse;
}

nlohmann::json noise_model_to_json(const MarkovNoiseModel& model) {
  nlohmann::json rates = nlohmann::json::array();
  for (Eigen::Index i = 0; i < model.rates.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < model.rates.cols(); ++j) row.push_back(model.rates(i, j));
    rates.push_back(std::move(row));
  }
  nlohmann::json states = nlohmann::json::array();
  for (const auto& h : model.statics) states.push_back({{"delta_h", matrix_to_json(h)}});
  return {{"rates", std::move(rates)},
          {"control", matrix_to_json(model.control)},
          {"states", std::move(states)}};
}

MarkovNoiseModel noise_model_from_json(const nlohmann::json& j) {
  MarkovNoiseModel model;
  const auto& rates = j.at("rates");
  const auto n = rates.size();
  model.rates = RealMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      model.rates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rates[i][k].get<double>();
    }
  }
  model.control = matrix_from_json(j.at("control"));
  for (const auto& s : j.at("states")) {
    model.statics.push_back(matrix_from_json(s.at("delta_h")));
  }
  model.validate();
  return model;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const nlohmann::json& resolved_config)
    : impl_(new Impl{std::ofstream(path)}) {
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open output file: " + path);
  }
  impl_->out << "# rtnoise " << kVersion << "\n";
  impl_->out << "# config " << resolved_config.dump() << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::header(const std::string& line) { impl_->out << line << "\n"; }

void CsvWriter::row(const std::string& line) { impl_->out << line << "\n"; }

}  // namespace rtnoise
