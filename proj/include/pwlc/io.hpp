// JSON and CSV serialization of system descriptors, hypothesis reports and
// cycle reports.
#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwlc/cycles.hpp"
#include "pwlc/families.hpp"
#include "pwlc/hypotheses.hpp"

namespace pwlc {

using json = nlohmann::json;

struct SystemDescriptor {
  double gamma = 0.75;
  BoundaryDescriptor boundary;
};

inline FamilyKind family_from_string(const std::string& name) {
  for (auto k : {FamilyKind::zero, FamilyKind::sine, FamilyKind::oscillatory, FamilyKind::cosine,
                 FamilyKind::table, FamilyKind::custom}) {
    if (name == to_string(k)) return k;
  }
  throw ParameterError("unknown boundary family '" + name + "'");
}

inline json to_json(const BoundaryDescriptor& d) {
  json params = json::object();
  switch (d.family) {
    case FamilyKind::sine:
    case FamilyKind::cosine: params["n"] = d.n; break;
    case FamilyKind::oscillatory: params["alpha"] = d.alpha; break;
    case FamilyKind::table: {
      json rows = json::array();
      for (const auto& s : d.samples) {
        json row = {s.y, s.h};
        if (!std::isnan(s.slope)) row.push_back(s.slope);
        rows.push_back(row);
      }
      params["samples"] = rows;
      break;
    }
    case FamilyKind::custom: params["label"] = d.label; break;
    case FamilyKind::zero: break;
  }
  return {{"family", to_string(d.family)}, {"params", params}};
}

inline BoundaryDescriptor boundary_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw ParameterError("boundary descriptor needs a \"family\" field");
  }
  BoundaryDescriptor d;
  d.family = family_from_string(j.at("family").get<std::string>());
  const json params = j.value("params", json::object());
  try {
    switch (d.family) {
      case FamilyKind::sine:
      case FamilyKind::cosine: d.n = params.at("n").get<int>(); break;
      case FamilyKind::oscillatory: d.alpha = params.at("alpha").get<double>(); break;
      case FamilyKind::table:
        for (const auto& row : params.at("samples")) {
          TableSample s;
          s.y = row.at(0).get<double>();
          s.h = row.at(1).get<double>();
          if (row.size() > 2 && !row.at(2).is_null()) s.slope = row.at(2).get<double>();
          d.samples.push_back(s);
        }
        break;
      case FamilyKind::custom: d.label = params.value("label", ""); break;
      case FamilyKind::zero: break;
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed boundary params: ") + e.what());
  }
  return d;
}

inline json to_json(const SystemDescriptor& s) {
  return {{"gamma", s.gamma}, {"boundary", to_json(s.boundary)}};
}

inline SystemDescriptor system_from_json(const json& j) {
  SystemDescriptor s;
  try {
    s.gamma = j.at("gamma").get<double>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("system descriptor needs a numeric \"gamma\": ") + e.what());
  }
  s.boundary = boundary_from_json(j.value("boundary", json{{"family", "zero"}}));
  return s;
}

inline json to_json(const Violation& v) {
  return {{"hyp", v.hypothesis}, {"y", v.y}, {"lhs", v.lhs}, {"rhs", v.rhs}};
}

inline json to_json(const HypothesisReport& r) {
  auto all = [&](auto pred) {
    for (const auto& s : r.samples) {
      if (!pred(s)) return false;
    }
    return true;
  };
  json out = {
      {"h1", r.h1_matrix},
      {"h2", r.h2_matrix},
      {"h1p", all([](const GridVerdict& s) { return s.h1p; })},
      {"h2p", all([](const GridVerdict& s) { return s.h2p; })},
      {"h3p", all([](const GridVerdict& s) { return s.h3p; })},
      {"transversal", all([](const GridVerdict& s) { return s.transversal; })},
      {"grid_points", r.samples.size()},
      {"passed", r.passed()},
  };
  if (!r.samples.empty()) {
    out["y_min"] = r.samples.front().y;
    out["y_max"] = r.samples.back().y;
  }
  out["violations"] = json::array();
  for (const auto& v : r.violations) out["violations"].push_back(to_json(v));
  out["warnings"] = json::array();
  for (const auto& v : r.warnings) out["warnings"].push_back(to_json(v));
  return out;
}

inline json to_json(const CycleReport& c) {
  return {{"y_star", c.y_star},
          {"upper_crossing", {c.upper_crossing.x, c.upper_crossing.y}},
          {"lower_crossing", {c.lower_crossing.x, c.lower_crossing.y}},
          {"lower_y", c.lower_crossing.y},
          {"period", c.period},
          {"stability", to_string(c.stability)},
          {"h_prime", c.h_prime},
          {"f3", c.f3},
          {"hyperbolic", c.hyperbolic}};
}

inline constexpr const char* kCycleCsvHeader = "y_star,lower_y,period,stability,h_prime,f3,hyperbolic";

inline std::string to_csv_row(const CycleReport& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%s,%.12g,%.12g,%s", c.y_star,
                c.lower_crossing.y, c.period, to_string(c.stability), c.h_prime, c.f3,
                c.hyperbolic ? "true" : "false");
  return buf;
}

inline void write_cycles_csv(std::ostream& out, const std::vector<CycleReport>& cycles) {
  out << kCycleCsvHeader << '\n';
  for (const auto& c : cycles) out << to_csv_row(c) << '\n';
}

}  // namespace pwlc
