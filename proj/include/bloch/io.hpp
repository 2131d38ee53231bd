#pragma once

// JSON formats.
//
//   Poly:    { "center": [re, im], "coeffs": [[re, im], ...] }
//   PolyMap: { "m": int, "components": [ { "terms": [ { "k": [k1..km], "c": [re, im] } ] } ] }
//
// Complex numbers are always [re, im] pairs.

#include <string>

#include <json.hpp>

#include "bloch/bounds.hpp"
#include "bloch/contraction.hpp"
#include "bloch/series.hpp"
#include "bloch/wu.hpp"

namespace bloch {

using Json = nlohmann::json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);

Json polymap_to_json(const PolyMap& F);
PolyMap polymap_from_json(const Json& j);

Json to_json(const CertificationResult& c);
CertificationResult certification_from_json(const Json& j);
Json to_json(const VerificationReport& r);
Json to_json(const BoundParams& p);
Json to_json(const EHParams& p);
Json to_json(const JacobianStats& s);
Json to_json(const WuKEstimate& e);
Json to_json(const MvCertificationResult& c);

/// Top-level CLI output.
struct RunReport {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json provenance = Json::object();

  bool operator==(const RunReport&) const = default;
};

Json to_json(const RunReport& r);
RunReport run_report_from_json(const Json& j);

/// Reads and parses a JSON file; throws ParseError on failure.
Json read_json_file(const std::string& path);

}  // namespace bloch
