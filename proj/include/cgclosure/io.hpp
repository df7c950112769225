#pragma once

// JSON encoding of exact data. Rationals are strings "p/q"; an element of
// Q(sqrt m) is a string when rational and a pair [rat, irr] otherwise, with
// the field index m stored next to the data as "field".

#include <json.hpp>

#include "cgclosure/closure.hpp"

namespace cgc {

using Json = nlohmann::ordered_json;

/// Malformed JSON input; the CLI treats it as a usage error.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const Integer& x);
Json to_json(const Rational& x);
Json to_json(const QuadExt& x);
Json to_json(const ZVec& v);
Json to_json(const RVec& v);
Json to_json(const QVec& v);

Integer integer_from_json(const Json& j);
Rational rational_from_json(const Json& j);
QuadExt quad_from_json(const Json& j, int field);
QVec qvec_from_json(const Json& j, int field);
ZVec zvec_from_json(const Json& j);

/// {"empty", "dim", "field", "vertices", "inequalities"}.
Json polytope_to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j, size_t n);

/// {"type": "polytope"|"ball"|"ellipse", ...}.
ConvexBody body_from_json(const Json& j);
Json body_to_json(const ConvexBody& k);

Json cut_to_json(const CGCut& cut);
CGCut cut_from_json(const Json& j);

Json certificate_to_json(const HomogeneityCertificate& cert);
Json approximant_to_json(const Approximant& ap);

struct ResultOptions {
  bool timing = true;
  bool certificates = true;
};

/// Closure, defining cuts, certificate log and recursion tree.
Json closure_to_json(const ClosureResult& r, const ResultOptions& opts = {});
/// Reads back the closure, cuts and recursion tree (not the certificates).
ClosureResult closure_from_json(const Json& j);

Json oracle_to_json(const OracleResult& r);
Json report_to_json(const VerifyReport& r);

/// Reads a JSON file; throws SchemaError when missing or malformed.
Json read_json_file(const std::string& path);

}  // namespace cgc
