#pragma once

#include <charconv>
#include <cstdint>
#include <string>

#include "inversions.hpp"
#include "simulator.hpp"

namespace dickman {

// Shortest round-trip decimal form; the one float format every CSV and
// manifest uses, so reruns can be compared byte for byte.
inline std::string format_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline std::string sim_points_csv(const SimResult& r) {
  std::string out = "n,m_n,mean,variance,model_variance,ks,w1\n";
  for (const auto& p : r.points) {
    out += std::to_string(p.n);
    out += ',';
    out += format_double(p.m_n);
    out += ',';
    out += format_double(p.mean);
    out += ',';
    out += format_double(p.variance);
    out += ',';
    out += format_double(p.model_variance);
    out += ',';
    out += format_double(p.ks);
    out += ',';
    out += format_double(p.w1);
    out += '\n';
  }
  return out;
}

inline std::string sim_samples_csv(const SimResult& r) {
  std::string out = "n,replicate,w\n";
  for (const auto& p : r.points) {
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
      out += std::to_string(p.n);
      out += ',';
      out += std::to_string(i);
      out += ',';
      out += format_double(p.samples[i]);
      out += '\n';
    }
  }
  return out;
}

inline std::string inversion_samples_csv(const InversionRun& r) {
  std::string out = "replicate,inversions\n";
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(r.samples[i]);
    out += '\n';
  }
  return out;
}

}  // namespace dickman
