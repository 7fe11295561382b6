#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsos/applications.hpp"
#include "fsos/certificate.hpp"
#include "fsos/errors.hpp"
#include "fsos/fourier.hpp"
#include "fsos/group.hpp"

namespace fsos {

using json = nlohmann::json;

inline json group_to_json(const GroupSpec& spec) { return json(spec.orders()); }

inline GroupSpec group_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("group: expected a nonempty array");
  return GroupSpec(j.get<std::vector<index_t>>());
}

inline json expansion_to_json_coeffs(const FourierExpansion& e) {
  json coeffs = json::array();
  for (const auto& [chi, c] : e.entries()) {
    json entry;
    entry["chi"] = e.spec().coords_of(chi);
    entry["re"] = c.real();
    entry["im"] = c.imag();
    coeffs.push_back(entry);
  }
  return coeffs;
}

inline FourierExpansion expansion_from_json_coeffs(const GroupSpec& spec, const json& coeffs) {
  FourierExpansion e(spec);
  for (const auto& entry : coeffs) {
    index_t chi = spec.index_of(entry.at("chi").get<std::vector<index_t>>());
    e.add(chi, cplx(entry.at("re").get<double>(),
                    entry.value("im", 0.0)));
  }
  return e;
}

/// Function file: {"group":[...], "values":[[re,im],...]} or
/// {"group":[...], "coeffs":[{"chi":[...],"re":..,"im":..},...]}. Readers
/// accept either; writers emit the sparse form when |supp| < |G|/4.
struct LoadedFunction {
  GroupSpec spec;
  std::optional<GroupFunction> values;
  std::optional<FourierExpansion> coeffs;

  GroupFunction as_function() const {
    if (values) return *values;
    return inverse_transform(*coeffs);
  }
  FourierExpansion as_expansion(double prune_rel = 1e-12) const {
    if (coeffs) return *coeffs;
    return forward_transform(*values, prune_rel);
  }
};

inline LoadedFunction function_from_json(const json& j) {
  GroupSpec spec = group_from_json(j.at("group"));
  LoadedFunction out{spec, std::nullopt, std::nullopt};
  if (j.contains("coeffs")) {
    out.coeffs = expansion_from_json_coeffs(spec, j.at("coeffs"));
  } else if (j.contains("values")) {
    const json& vals = j.at("values");
    if (static_cast<index_t>(vals.size()) != spec.order())
      throw ArgumentError("function file: values length != |G|");
    std::vector<cplx> values;
    values.reserve(vals.size());
    for (const auto& v : vals) {
      if (v.is_array())
        values.emplace_back(v.at(0).get<double>(), v.size() > 1 ? v.at(1).get<double>() : 0.0);
      else
        values.emplace_back(v.get<double>(), 0.0);
    }
    out.values = GroupFunction(spec, std::move(values));
  } else {
    throw ArgumentError("function file: need \"values\" or \"coeffs\"");
  }
  return out;
}

inline json expansion_to_json(const FourierExpansion& e) {
  json j;
  j["group"] = group_to_json(e.spec());
  if (static_cast<index_t>(e.size()) * 4 < e.spec().order()) {
    j["coeffs"] = expansion_to_json_coeffs(e);
  } else {
    GroupFunction f = inverse_transform(e);
    json vals = json::array();
    for (const cplx& v : f.values()) vals.push_back({v.real(), v.imag()});
    j["values"] = vals;
  }
  return j;
}

inline json function_to_json(const GroupFunction& f, double prune_rel = 1e-12) {
  FourierExpansion e = forward_transform(f, prune_rel);
  if (static_cast<index_t>(e.size()) * 4 < f.spec().order()) {
    json j;
    j["group"] = group_to_json(f.spec());
    j["coeffs"] = expansion_to_json_coeffs(e);
    return j;
  }
  json j;
  j["group"] = group_to_json(f.spec());
  json vals = json::array();
  for (const cplx& v : f.values()) vals.push_back({v.real(), v.imag()});
  j["values"] = vals;
  return j;
}

/// Certificate file: {"group":[...], "squares":[[{"chi":..,"re":..,"im":..},..],..],
/// "support":[[...],...], "error":...}.
inline json certificate_to_json(const FsosCertificate& cert) {
  json j;
  j["group"] = group_to_json(cert.spec);
  json squares = json::array();
  for (const auto& g : cert.squares) squares.push_back(expansion_to_json_coeffs(g));
  j["squares"] = squares;
  json support = json::array();
  for (index_t chi : cert.support.indices()) support.push_back(cert.spec.coords_of(chi));
  j["support"] = support;
  j["error"] = cert.reported_error;
  return j;
}

inline FsosCertificate certificate_from_json(const json& j) {
  FsosCertificate cert;
  cert.spec = group_from_json(j.at("group"));
  for (const auto& sq : j.at("squares"))
    cert.squares.push_back(expansion_from_json_coeffs(cert.spec, sq));
  cert.support = squares_support(cert.spec, cert.squares);
  cert.reported_error = j.value("error", 0.0);
  return cert;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << j.dump(2) << "\n";
}

/// Weighted-clause text format, one clause per line: `w  +-i [+-j]`
/// (1-based variable numbers, sign = literal polarity, '#' comments).
inline Max2SatInstance max2sat_from_text(std::istream& in) {
  Max2SatInstance inst;
  std::string line;
  int max_var = 0;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::int64_t w;
    if (!(ls >> w)) continue;
    Max2SatInstance::Clause cl;
    cl.weight = w;
    std::int64_t lit;
    while (ls >> lit) {
      if (lit == 0) throw ArgumentError("max2sat: variable numbers are 1-based, got 0");
      int v = static_cast<int>(std::abs(lit)) - 1;
      cl.literals.emplace_back(v, lit > 0 ? 1 : -1);
      max_var = std::max(max_var, v + 1);
    }
    if (cl.literals.empty() || cl.literals.size() > 2)
      throw ArgumentError("max2sat: each clause carries 1 or 2 literals");
    inst.clauses.push_back(std::move(cl));
  }
  inst.vars = max_var;
  inst.validate();
  return inst;
}

}  // namespace fsos
