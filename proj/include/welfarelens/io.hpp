/*
 * Copyright 2026 The WelfareLens Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WELFARELENS_IO_HPP_
#define WELFARELENS_IO_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "welfarelens/basis.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/eval.hpp"
#include "welfarelens/policies.hpp"
#include "welfarelens/solvers.hpp"

namespace welfarelens {

using Json = nlohmann::ordered_json;

// JSON has no infinities or NaN; those travel as strings.
inline Json RealToJson(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double RealFromJson(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  Fail(ErrorCode::kData, "expected a real number, got " + j.dump());
}

inline Json RealsToJson(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(RealToJson(v));
  return out;
}

inline std::vector<double> RealsFromJson(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(RealFromJson(v));
  return out;
}

inline Json BasisSpecToJson(const BasisSpec& spec) {
  return Json{{"degree", spec.degree}, {"columns", spec.columns}};
}

inline std::optional<PolicyFamily> ParsePolicyFamily(const std::string& name) {
  for (PolicyFamily f :
       {PolicyFamily::kSignedThreshold, PolicyFamily::kAxisRectangle, PolicyFamily::kExplicitList}) {
    if (name == PolicyFamilyName(f)) return f;
  }
  return std::nullopt;
}

inline Json MemberToJson(const EnumerablePolicyClass::Member& m) {
  Json j{{"family", PolicyFamilyName(m.family)}, {"constant", m.constant}};
  if (m.constant) {
    j["constant_value"] = m.constant_value;
    return j;
  }
  switch (m.family) {
    case PolicyFamily::kSignedThreshold:
      j["coordinate"] = m.coordinate;
      j["threshold"] = RealToJson(m.threshold);
      j["sign"] = m.sign;
      break;
    case PolicyFamily::kAxisRectangle:
      j["lower"] = RealsToJson(m.lower);
      j["upper"] = RealsToJson(m.upper);
      break;
    case PolicyFamily::kExplicitList:
      j["list_index"] = m.list_index;
      break;
  }
  return j;
}

inline EnumerablePolicyClass::Member MemberFromJson(const Json& j) {
  EnumerablePolicyClass::Member m;
  const auto family = ParsePolicyFamily(j.at("family").get<std::string>());
  if (!family) Fail(ErrorCode::kData, "unknown policy family in member record");
  m.family = *family;
  m.constant = j.at("constant").get<bool>();
  if (m.constant) {
    m.constant_value = j.at("constant_value").get<int>();
    return m;
  }
  switch (m.family) {
    case PolicyFamily::kSignedThreshold:
      m.coordinate = j.at("coordinate").get<std::size_t>();
      m.threshold = RealFromJson(j.at("threshold"));
      m.sign = j.at("sign").get<int>();
      break;
    case PolicyFamily::kAxisRectangle:
      m.lower = RealsFromJson(j.at("lower"));
      m.upper = RealsFromJson(j.at("upper"));
      break;
    case PolicyFamily::kExplicitList:
      m.list_index = j.at("list_index").get<std::size_t>();
      break;
  }
  return m;
}

inline Json TrainedPolicyToJson(const TrainedPolicy& p) {
  Json j;
  j["route"] = RouteName(p.route);
  j["representation"] = RepresentationName(p.representation);
  j["description"] = p.description;
  j["objective"] = RealToJson(p.objective);
  j["lambda"] = RealToJson(p.lambda);
  j["scale_constant"] = RealToJson(p.scale_constant);
  switch (p.representation) {
    case PolicyRepresentation::kEnumerableIndex:
      j["index"] = p.index;
      if (p.member) j["member"] = MemberToJson(*p.member);
      j["argopt"] = p.argopt;
      break;
    case PolicyRepresentation::kCandidateIndex:
      j["index"] = p.index;
      j["argopt"] = p.argopt;
      j["decisions"] = RealsToJson(p.decisions);
      break;
    case PolicyRepresentation::kParametric:
      j["link"] = p.link == Link::kSigmoid ? "sigmoid" : "linear-threshold";
      if (p.basis) {
        j["basis"] = BasisSpecToJson(p.basis->spec());
        j["basis"]["dim"] = p.basis->dim();
      }
      j["theta"] = RealsToJson(p.theta);
      j["converged"] = p.converged;
      j["saturated"] = p.saturated;
      j["iterations"] = p.iterations;
      j["gradient_norm"] = RealToJson(p.gradient_norm);
      break;
    case PolicyRepresentation::kPerRow:
      j["decisions"] = RealsToJson(p.decisions);
      break;
  }
  return j;
}

inline TrainedPolicy TrainedPolicyFromJson(const Json& j) {
  TrainedPolicy p;
  const auto route = ParseRoute(j.at("route").get<std::string>());
  if (!route) Fail(ErrorCode::kData, "unknown route in policy record");
  p.route = *route;
  const std::string rep = j.at("representation").get<std::string>();
  bool known = false;
  for (PolicyRepresentation r :
       {PolicyRepresentation::kEnumerableIndex, PolicyRepresentation::kCandidateIndex,
        PolicyRepresentation::kParametric, PolicyRepresentation::kPerRow}) {
    if (rep == RepresentationName(r)) {
      p.representation = r;
      known = true;
    }
  }
  if (!known) Fail(ErrorCode::kData, "unknown representation '" + rep + "'");
  p.description = j.at("description").get<std::string>();
  p.objective = RealFromJson(j.at("objective"));
  p.lambda = RealFromJson(j.at("lambda"));
  p.scale_constant = RealFromJson(j.at("scale_constant"));
  if (j.contains("index")) p.index = j.at("index").get<std::size_t>();
  if (j.contains("argopt")) p.argopt = j.at("argopt").get<std::vector<std::size_t>>();
  if (j.contains("member")) p.member = MemberFromJson(j.at("member"));
  if (j.contains("decisions")) p.decisions = RealsFromJson(j.at("decisions"));
  if (p.representation == PolicyRepresentation::kParametric) {
    p.link = j.at("link").get<std::string>() == "sigmoid" ? Link::kSigmoid : Link::kLinearThreshold;
    const Json& b = j.at("basis");
    p.basis = Basis(b.at("dim").get<std::size_t>(),
                    BasisSpec{b.at("degree").get<int>(),
                              b.at("columns").get<std::vector<std::size_t>>()});
    p.theta = RealsFromJson(j.at("theta"));
    p.converged = j.at("converged").get<bool>();
    p.saturated = j.at("saturated").get<bool>();
    p.iterations = j.at("iterations").get<int>();
    p.gradient_norm = RealFromJson(j.at("gradient_norm"));
  }
  return p;
}

inline Json ScaleResolutionToJson(const ScaleResolution& s) {
  return Json{{"ratio", RealToJson(s.ratio)},
              {"dispersion", RealToJson(s.dispersion)},
              {"match", s.match},
              {"consistent", s.consistent},
              {"entries", s.entries.size()}};
}

// Timings are left out so that reports are reproducible byte for byte.
inline Json EquivalenceReportToJson(const EquivalenceReport& r) {
  Json j;
  j["class_size"] = r.class_size;
  j["rows"] = r.rows;
  j["equiv_flag"] = r.sets_equal;
  j["ewm_set"] = r.ewm_set;
  j["ls_set"] = r.ls_set;
  j["ewm_index"] = r.ewm_index;
  j["ls_index"] = r.ls_index;
  j["ewm_policy"] = r.ewm_description;
  j["ewm_objective"] = RealToJson(r.ewm_objective);
  j["ls_objective"] = RealToJson(r.ls_objective);
  j["affine_constant"] = RealToJson(r.affine_constant);
  j["affine_policies"] = r.affine_policies;
  j["max_affine_residual"] = RealToJson(r.max_affine_residual);
  j["affine_ok"] = r.affine_ok;
  if (r.has_scale) j["scale"] = ScaleResolutionToJson(r.scale);
  return j;
}

}  // namespace welfarelens

#endif  // WELFARELENS_IO_HPP_
