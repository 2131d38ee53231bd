#include "bloch/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bloch {

namespace {

/// NaN and infinities have no JSON encoding; emit null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double real_from_json(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number for ") + what);
  return j.get<double>();
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected a complex number [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of complex numbers");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json poly_to_json(const Poly& p) {
  Json coeffs = Json::array();
  for (Eigen::Index k = 0; k < p.size(); ++k) coeffs.push_back(complex_to_json(p.coeffs()(k)));
  return Json{{"center", complex_to_json(p.center())}, {"coeffs", coeffs}};
}

Poly poly_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("polynomial must be a JSON object");
  if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
    throw ParseError("polynomial needs a nonempty \"coeffs\" array");
  const Complex center = j.contains("center") ? complex_from_json(j["center"]) : Complex(0.0);
  Poly::CoeffVector c(static_cast<Eigen::Index>(j["coeffs"].size()));
  for (std::size_t k = 0; k < j["coeffs"].size(); ++k)
    c(static_cast<Eigen::Index>(k)) = complex_from_json(j["coeffs"][k]);
  try {
    return Poly(std::move(c), center);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Json polymap_to_json(const PolyMap& F) {
  Json comps = Json::array();
  for (const auto& comp : F.components()) {
    Json terms = Json::array();
    for (const auto& t : comp.terms()) terms.push_back(Json{{"k", t.k}, {"c", complex_to_json(t.c)}});
    comps.push_back(Json{{"terms", terms}});
  }
  return Json{{"m", F.dim()}, {"components", comps}};
}

PolyMap polymap_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j["m"].is_number_integer())
    throw ParseError("map needs an integer \"m\"");
  const int m = j["m"].get<int>();
  if (!j.contains("components") || !j["components"].is_array() ||
      static_cast<int>(j["components"].size()) != m)
    throw ParseError("map needs exactly m \"components\"");
  try {
    std::vector<MultiPoly> comps;
    for (const auto& cj : j["components"]) {
      if (!cj.contains("terms") || !cj["terms"].is_array())
        throw ParseError("component needs a \"terms\" array");
      std::vector<Monomial> terms;
      for (const auto& tj : cj["terms"]) {
        if (!tj.contains("k") || !tj["k"].is_array() || !tj.contains("c"))
          throw ParseError("term needs \"k\" and \"c\"");
        MultiIndex k;
        for (const auto& v : tj["k"]) {
          if (!v.is_number_integer()) throw ParseError("multi-index entries must be integers");
          k.push_back(v.get<int>());
        }
        terms.push_back(Monomial{std::move(k), complex_from_json(tj["c"])});
      }
      comps.emplace_back(m, std::move(terms));
    }
    return PolyMap(std::move(comps));
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const CertificationResult& c) {
  return Json{{"center_b", complex_to_json(c.center_b)},
              {"domain_radius_rho", c.domain_radius_rho},
              {"image_center", complex_to_json(c.image_center)},
              {"schlicht_radius", c.schlicht_radius},
              {"kind", to_string(c.kind)},
              {"contraction_factor", number(c.contraction_factor)},
              {"inside_unit_disk", c.inside_unit_disk},
              {"max_modulus", "sampled estimate"}};
}

CertificationResult certification_from_json(const Json& j) {
  try {
    CertificationResult c;
    c.center_b = complex_from_json(j.at("center_b"));
    c.domain_radius_rho = real_from_json(j.at("domain_radius_rho"), "domain_radius_rho");
    c.image_center = complex_from_json(j.at("image_center"));
    c.schlicht_radius = real_from_json(j.at("schlicht_radius"), "schlicht_radius");
    c.kind = certificate_kind_from_string(j.at("kind").get<std::string>());
    c.contraction_factor = real_from_json(j.at("contraction_factor"), "contraction_factor");
    c.inside_unit_disk = j.value("inside_unit_disk", false);
    return c;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

Json to_json(const VerificationReport& r) {
  return Json{{"samples", r.samples},
              {"passed", r.passed},
              {"failures", r.failures()},
              {"solver_failures", r.solver_failures},
              {"residual_failures", r.residual_failures},
              {"injectivity_collisions", r.injectivity_collisions},
              {"worst_residual", r.worst_residual},
              {"max_iterations", r.max_iterations},
              {"first_error", r.first_error},
              {"ok", r.ok()}};
}

Json to_json(const BoundParams& p) {
  return Json{{"params", {{"gamma", p.gamma}, {"sigma", p.sigma}}}, {"value", p.value}};
}

Json to_json(const EHParams& p) {
  return Json{{"params", {{"rho", p.rho}, {"r", p.r}, {"a2", p.a2}, {"a3", p.a3}}},
              {"value", p.value},
              {"radicand", "a3^2 r^4"}};
}

Json to_json(const JacobianStats& s) {
  return Json{{"at_point", vector_to_json(s.at_point)},
              {"lambda_min", s.lambda_min},
              {"lambda_max", s.lambda_max},
              {"det_modulus", s.det_modulus},
              {"wu_ratio", number(s.wu_ratio)},
              {"degenerate", s.degenerate}};
}

Json to_json(const WuKEstimate& e) {
  return Json{{"K", e.K},
              {"argmax", vector_to_json(e.argmax)},
              {"points", e.points},
              {"degenerate", e.degenerate},
              {"estimate", "sampled lower bound"}};
}

Json to_json(const MvCertificationResult& c) {
  return Json{{"beta", vector_to_json(c.beta)},
              {"eta", c.eta},
              {"sigma", c.sigma},
              {"image_center", vector_to_json(c.image_center)},
              {"lambda_min", c.lambda_min},
              {"inverse_norm", c.inverse_norm},
              {"contraction_factor", c.contraction_factor},
              {"mapping_margin", c.mapping_margin},
              {"schlicht_radius", c.schlicht_radius},
              {"contraction_holds", c.contraction_holds},
              {"diagnostic", c.diagnostic}};
}

Json to_json(const RunReport& r) {
  return Json{{"command", r.command},
              {"inputs", r.inputs},
              {"results", r.results},
              {"provenance", r.provenance}};
}

RunReport run_report_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
    throw ParseError("report needs a string \"command\"");
  RunReport r;
  r.command = j["command"].get<std::string>();
  r.inputs = j.value("inputs", Json::object());
  r.results = j.value("results", Json::object());
  r.provenance = j.value("provenance", Json::object());
  return r;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace bloch
