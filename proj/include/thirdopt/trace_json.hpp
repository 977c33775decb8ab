#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "thirdopt/escape.hpp"

namespace thirdopt {

// One JSON object per line. Field order is fixed so that identical runs
// produce identical bytes.

inline nlohmann::ordered_json record_to_json(const IterationRecord& r) {
  nlohmann::ordered_json j;
  j["iter"] = r.iter;
  j["phase"] = to_string(r.phase);
  j["f"] = r.f;
  j["grad_norm"] = r.grad_norm;
  j["mu"] = r.mu;
  j["c_q"] = r.c_q;
  j["subspace_dim"] = r.subspace_dim;
  j["step_norm"] = r.step_norm;
  nlohmann::ordered_json flags;
  flags["cubic_decrease"] = r.flags.cubic_decrease;
  flags["step_vs_mu"] = r.flags.step_vs_mu;
  if (r.flags.third_decrease) {
    flags["third_decrease"] = *r.flags.third_decrease;
  } else {
    flags["third_decrease"] = nullptr;
  }
  flags["monotone"] = r.flags.monotone;
  j["flags"] = std::move(flags);
  j["f_prev"] = r.f_prev;
  j["f_z"] = r.f_z;
  j["min_eig"] = r.min_eig;
  j["cubic_step_norm"] = r.cubic_step_norm;
  j["third_step_norm"] = r.third_step_norm;
  j["sampler_draws"] = r.sampler_draws;
  j["x"] = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
  return j;
}

inline IterationRecord record_from_json(const nlohmann::ordered_json& j) {
  try {
    IterationRecord r;
    r.iter = j.at("iter").get<int>();
    r.phase = phase_from_string(j.at("phase").get<std::string>());
    r.f = j.at("f").get<double>();
    r.grad_norm = j.at("grad_norm").get<double>();
    r.mu = j.at("mu").get<double>();
    r.c_q = j.at("c_q").get<double>();
    r.subspace_dim = j.at("subspace_dim").get<int>();
    r.step_norm = j.at("step_norm").get<double>();
    const auto& flags = j.at("flags");
    r.flags.cubic_decrease = flags.at("cubic_decrease").get<bool>();
    r.flags.step_vs_mu = flags.at("step_vs_mu").get<bool>();
    if (!flags.at("third_decrease").is_null()) r.flags.third_decrease = flags.at("third_decrease").get<bool>();
    r.flags.monotone = flags.at("monotone").get<bool>();
    r.f_prev = j.at("f_prev").get<double>();
    r.f_z = j.at("f_z").get<double>();
    r.min_eig = j.at("min_eig").get<double>();
    r.cubic_step_norm = j.at("cubic_step_norm").get<double>();
    r.third_step_norm = j.at("third_step_norm").get<double>();
    r.sampler_draws = j.at("sampler_draws").get<int>();
    const auto x = j.at("x").get<std::vector<double>>();
    r.x = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("trace record: ") + e.what());
  }
}

inline void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& r : trace.records) out << record_to_json(r).dump() << '\n';
}

inline std::vector<IterationRecord> read_trace_records(std::istream& in) {
  std::vector<IterationRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::ordered_json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(std::string("trace line: ") + e.what());
    }
  }
  return out;
}

}  // namespace thirdopt
