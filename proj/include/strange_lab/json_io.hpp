#pragma once

// JSON forms of the exact types. Big integers and rationals are always decimal
// strings; an exact series (no truncation) carries "prec": null.

#include <string>
#include <vector>

#include "json.hpp"
#include "strange_lab/arith.hpp"
#include "strange_lab/series.hpp"
#include "strange_lab/strange.hpp"
#include "strange_lab/verify.hpp"

namespace strange_lab {

using json = nlohmann::ordered_json;

inline constexpr const char* xitable_schema = "strange-lab/xitable/v1";

inline std::string rat_to_string(const BigRat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline BigRat rat_from_string(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return BigRat(BigInt(s));
    return make_rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw precondition_error("not a decimal rational: '" + s + "'");
  }
}

inline json to_json(const CycNum& x) {
  json coords = json::array();
  for (const auto& c : x.coords()) coords.push_back(rat_to_string(c));
  return json{{"N", x.order()}, {"coords", std::move(coords)}};
}

inline CycNum cycnum_from_json(const json& j) {
  const long N = j.at("N").get<long>();
  std::vector<BigRat> coords;
  for (const auto& c : j.at("coords")) coords.push_back(rat_from_string(c.get<std::string>()));
  if (static_cast<long>(coords.size()) != euler_phi(N)) throw precondition_error("CycNum json: wrong coordinate count");
  return CycNum::from_coords(N, coords);
}

inline json to_json(const QSeries& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(to_json(c));
  return json{{"N", f.zero().order()},
              {"min_exp", f.min_exp()},
              {"prec", f.is_exact() ? json(nullptr) : json(f.prec())},
              {"coeffs", std::move(coeffs)}};
}

inline QSeries qseries_from_json(const json& j) {
  const long N = j.at("N").get<long>();
  std::vector<CycNum> coeffs;
  for (const auto& c : j.at("coeffs")) {
    coeffs.push_back(cycnum_from_json(c));
    if (coeffs.back().order() != N) throw precondition_error("QSeries json: mixed N");
  }
  const long prec = j.at("prec").is_null() ? QSeries::exact : j.at("prec").get<long>();
  return QSeries(CycNum(N), j.at("min_exp").get<long>(), prec, std::move(coeffs));
}

inline json to_json(const IntPoly& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(c.get_str());
  return json{{"min_exp", f.min_exp()}, {"prec", f.is_exact() ? json(nullptr) : json(f.prec())}, {"coeffs", coeffs}};
}

inline json to_json(const StrangeSpec& s) {
  json j{{"family", to_string(s.family)}};
  if (s.family == Family::Ft) j["t"] = s.t;
  j["r"] = s.r;
  j["s"] = s.s;
  j["N"] = s.N;
  return j;
}

inline StrangeSpec spec_from_json(const json& j) {
  StrangeSpec s;
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "F") {
    s.family = Family::F;
  } else if (fam == "Ft") {
    s.family = Family::Ft;
    s.t = j.at("t").get<int>();
  } else {
    throw precondition_error("unknown family '" + fam + "'");
  }
  s.r = j.at("r").get<long>();
  s.s = j.value("s", 0L);
  s.N = j.value("N", 1L);
  return s.normalized();
}

/// Timing is not serialized, so equal tables give equal documents.
inline json to_json(const XiTable& t) {
  json values = json::array();
  for (const auto& v : t.values) values.push_back(to_json(v)["coords"]);
  return json{{"schema", xitable_schema},   {"spec", to_json(t.spec)},        {"order", t.M},
              {"height_used", t.height_used}, {"stabilized", t.stabilized}, {"values", std::move(values)}};
}

inline XiTable xitable_from_json(const json& j) {
  if (j.value("schema", std::string()) != xitable_schema) throw precondition_error("XiTable json: schema mismatch");
  XiTable t;
  t.spec = spec_from_json(j.at("spec"));
  t.M = j.at("order").get<long>();
  t.height_used = j.at("height_used").get<long>();
  t.stabilized = j.at("stabilized").get<bool>();
  for (const auto& v : j.at("values")) t.values.push_back(cycnum_from_json(json{{"N", t.spec.N}, {"coords", v}}));
  if (static_cast<long>(t.values.size()) != t.M) throw precondition_error("XiTable json: value count differs from order");
  return t;
}

inline json to_json(const ResidueSet& s) {
  json j{{"p", s.p}, {"kind", to_string(s.kind)}, {"r", s.r}, {"s", s.s}};
  if (s.t) j["t"] = s.t;
  j["members"] = s.members;
  j["max"] = s.members.empty() ? json(nullptr) : json(s.max());
  return j;
}

inline json to_json(const CongruenceReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    json e{{"m", v.m}, {"j", v.j}, {"n", v.n}, {"pass", v.pass}};
    if (v.value) e["value"] = to_json(*v.value);
    verdicts.push_back(std::move(e));
  }
  return json{{"spec", to_json(r.spec)},
              {"p", r.p},
              {"lambda", r.lambda},
              {"m_max", r.m_max},
              {"set_used", to_json(r.set_used)},
              {"j_range", r.j_range},
              {"explicit_j", r.explicit_j},
              {"height_used", r.height_used},
              {"stabilized", r.stabilized},
              {"all_pass", r.all_pass()},
              {"verdicts", std::move(verdicts)},
              {"wall_time", r.seconds}};
}

}  // namespace strange_lab
