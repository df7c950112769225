#include "cgclosure/io.hpp"

#include <fstream>

namespace cgc {

namespace {

[[noreturn]] void schema(const std::string& msg) { throw SchemaError(msg); }

const Json& field_at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int field_index(const Json& j) {
  if (!j.is_object() || !j.contains("field")) return 0;
  const Json& f = j.at("field");
  if (!f.is_number_integer()) schema("\"field\" must be an integer");
  return f.get<int>();
}

}  // namespace

Json to_json(const Integer& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

Json to_json(const Rational& x) { return Json(to_string(x)); }

Json to_json(const QuadExt& x) {
  if (x.is_rational()) return to_json(x.rat());
  return Json::array({to_string(x.rat()), to_string(x.irr())});
}

Json to_json(const ZVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const RVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const QVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer out;
    if (out.set_str(j.get<std::string>(), 10) != 0) schema("not an integer: " + j.get<std::string>());
    return out;
  }
  schema("expected an integer, got " + j.dump());
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      schema("not a rational: " + j.get<std::string>());
    }
  }
  schema("expected a rational string \"p/q\", got " + j.dump());
}

QuadExt quad_from_json(const Json& j, int field) {
  if (j.is_array()) {
    if (j.size() != 2) schema("a quadratic value is a pair [rat, irr], got " + j.dump());
    Rational irr = rational_from_json(j[1]);
    if (sgn(irr) == 0) return QuadExt(rational_from_json(j[0]));
    if (field == 0) schema("irrational value " + j.dump() + " needs a \"field\"");
    try {
      return QuadExt(rational_from_json(j[0]), irr, field);
    } catch (const Error& e) {
      schema(e.what());
    }
  }
  return QuadExt(rational_from_json(j));
}

QVec qvec_from_json(const Json& j, int field) {
  if (!j.is_array()) schema("expected a vector, got " + j.dump());
  QVec out;
  for (const auto& x : j) out.push_back(quad_from_json(x, field));
  return out;
}

ZVec zvec_from_json(const Json& j) {
  if (!j.is_array()) schema("expected an integer vector, got " + j.dump());
  ZVec out;
  for (const auto& x : j) out.push_back(integer_from_json(x));
  return out;
}

Json polytope_to_json(const Polytope& p) {
  Json out;
  out["empty"] = p.is_empty();
  out["dim"] = p.dim();
  out["ambient_dim"] = p.ambient_dim();
  int field = p.is_empty() ? 0 : p.field();
  if (field != 0) out["field"] = field;
  Json verts = Json::array();
  for (const auto& v : p.vertices()) verts.push_back(to_json(v));
  out["vertices"] = std::move(verts);
  Json ineqs = Json::array();
  if (!p.is_empty()) {
    for (const auto& e : p.affine_hull().equations())
      ineqs.push_back({{"normal", to_json(e.normal)}, {"rhs", to_json(e.rhs)}, {"equation", true}});
    for (const auto& f : p.facets()) ineqs.push_back({{"normal", to_json(f.normal)}, {"rhs", to_json(f.rhs)}});
  }
  out["inequalities"] = std::move(ineqs);
  return out;
}

Polytope polytope_from_json(const Json& j, size_t n) {
  int field = field_index(j);
  if (j.contains("ambient_dim")) n = j.at("ambient_dim").get<size_t>();
  if (j.contains("vertices")) {
    std::vector<QVec> pts;
    for (const auto& v : j.at("vertices")) {
      QVec x = qvec_from_json(v, field);
      if (x.size() != n) schema("vertex " + v.dump() + " has the wrong dimension");
      pts.push_back(std::move(x));
    }
    return Polytope::from_vertices(n, std::move(pts));
  }
  if (j.contains("inequalities")) {
    std::vector<Halfspace> hs;
    for (const auto& h : j.at("inequalities")) {
      QVec a = qvec_from_json(field_at(h, "normal"), field);
      QuadExt b = quad_from_json(field_at(h, "rhs"), field);
      if (a.size() != n) schema("inequality " + h.dump() + " has the wrong dimension");
      if (h.contains("equation") && h.at("equation").get<bool>()) {
        QVec neg = a;
        for (auto& x : neg) x = -x;
        hs.push_back({std::move(neg), -b});
      }
      hs.push_back({std::move(a), std::move(b)});
    }
    return Polytope::from_inequalities(n, hs);
  }
  schema("a polytope needs \"vertices\" or \"inequalities\"");
}

ConvexBody body_from_json(const Json& in) {
  const Json& j = in.is_object() && in.contains("body") ? in.at("body") : in;
  if (!j.is_object()) schema("body must be an object");
  const Json& type = field_at(j, "type");
  if (!type.is_string()) schema("\"type\" must be a string");
  const std::string t = type.get<std::string>();
  int field = field_index(j);
  try {
    if (t == "polytope") {
      size_t n = 0;
      if (j.contains("vertices") && !j.at("vertices").empty()) n = j.at("vertices")[0].size();
      else if (j.contains("inequalities") && !j.at("inequalities").empty())
        n = field_at(j.at("inequalities")[0], "normal").size();
      if (j.contains("dim")) n = j.at("dim").get<size_t>();
      if (n == 0) schema("polytope must list vertices or inequalities");
      Polytope p = polytope_from_json(j, n);
      if (p.is_empty()) schema("polytope is empty");
      return ConvexBody(std::move(p));
    }
    if (t == "ball") {
      return ConvexBody(Ball{to_rvec(qvec_from_json(field_at(j, "center"), 0)), rational_from_json(field_at(j, "radius"))},
                        field);
    }
    if (t == "ellipse") {
      Matrix<Rational> shape;
      for (const auto& row : field_at(j, "shape")) shape.push_back(to_rvec(qvec_from_json(row, 0)));
      return ConvexBody(Ellipse2D{to_rvec(qvec_from_json(field_at(j, "center"), 0)), std::move(shape)}, field);
    }
  } catch (const nlohmann::json::exception& e) {
    schema(e.what());
  }
  schema("unknown body type \"" + t + "\" (expected polytope, ball or ellipse)");
}

Json body_to_json(const ConvexBody& k) {
  Json out;
  if (const auto* p = std::get_if<Polytope>(&k.shape())) {
    out["type"] = "polytope";
    if (int f = p->field(); f != 0) out["field"] = f;
    Json verts = Json::array();
    for (const auto& v : p->vertices()) verts.push_back(to_json(v));
    out["vertices"] = std::move(verts);
  } else if (const auto* b = std::get_if<Ball>(&k.shape())) {
    out["type"] = "ball";
    if (k.field() != 0) out["field"] = k.field();
    out["center"] = to_json(b->center);
    out["radius"] = to_json(b->radius);
  } else {
    const auto& e = std::get<Ellipse2D>(k.shape());
    out["type"] = "ellipse";
    if (k.field() != 0) out["field"] = k.field();
    out["center"] = to_json(e.center);
    Json shape = Json::array();
    for (const auto& row : e.shape) shape.push_back(to_json(row));
    out["shape"] = std::move(shape);
  }
  return out;
}

Json cut_to_json(const CGCut& cut) {
  Json out{{"c", to_json(cut.c)}, {"rhs", to_json(cut.rhs)}, {"certified", cut.certified}};
  if (!cut.provenance.empty()) out["provenance"] = cut.provenance;
  return out;
}

CGCut cut_from_json(const Json& j) {
  CGCut cut;
  cut.c = zvec_from_json(field_at(j, "c"));
  cut.rhs = integer_from_json(field_at(j, "rhs"));
  if (j.contains("certified")) cut.certified = j.at("certified").get<bool>();
  if (j.contains("provenance")) cut.provenance = j.at("provenance").get<std::string>();
  return cut;
}

namespace {

int field_of_cert(const HomogeneityCertificate& cert) {
  int f = field_of(cert.pi);
  if (f == 0) f = cert.delta.field();
  if (f == 0) f = cert.alpha.field();
  if (f == 0) f = field_of(cert.lambda);
  return f;
}

Json constants_to_json(const WorkingConstants& w) {
  Json out{{"delta_used", to_json(w.delta_used)},
           {"floor_delta", to_json(w.floor_delta)},
           {"eps", to_json(w.eps)},
           {"eps1", to_json(w.eps1)}};
  out["eps2"] = w.eps2 ? to_json(*w.eps2) : Json(nullptr);
  out["n_bound"] = to_json(w.n_bound);
  out["face_radius"] = to_json(w.face_radius);
  out["degenerate"] = w.degenerate;
  return out;
}

}  // namespace

Json certificate_to_json(const HomogeneityCertificate& cert) {
  Json out;
  if (int f = field_of_cert(cert); f != 0) out["field"] = f;
  out["c"] = to_json(cert.c);
  out["delta"] = to_json(cert.delta);
  out["pi"] = to_json(cert.pi);
  out["pi0"] = to_json(cert.pi0);
  out["scale"] = to_json(cert.scale);
  out["constants"] = constants_to_json(cert.constants);
  out["threshold"] = to_json(cert.threshold);
  Json fam = Json::array();
  for (const auto& m : cert.family)
    fam.push_back({{"a", to_json(m.a)},
                   {"m", to_json(m.m)},
                   {"residual", to_json(m.residual)},
                   {"rhs", to_json(m.rhs)},
                   {"cut", cut_to_json(m.cut)}});
  out["family"] = std::move(fam);
  out["lambda"] = to_json(cert.lambda);
  out["alpha"] = to_json(cert.alpha);
  return out;
}

Json approximant_to_json(const Approximant& ap) {
  Json out{{"a", to_json(ap.a)}, {"N", to_json(ap.n)}};
  int f = field_of(ap.residual);
  if (f != 0) out["field"] = f;
  out["residual"] = to_json(ap.residual);
  out["residual_norm_sq"] = to_json(ap.residual_norm_sq);
  return out;
}

namespace {

Json log_to_json(const CertificateLog& log, const ResultOptions& opts) {
  Json out;
  Json boundary = Json::array();
  for (const auto& c : log.boundary_cuts) boundary.push_back(cut_to_json(c));
  out["boundary_cuts"] = std::move(boundary);
  Json rational = Json::array();
  for (const auto& c : log.rational_cuts) rational.push_back(cut_to_json(c));
  out["rational_subspace_cuts"] = std::move(rational);
  if (opts.certificates) {
    Json pin = Json::array();
    for (const auto& c : log.pinning_certificates) pin.push_back(certificate_to_json(c));
    out["pinning_certificates"] = std::move(pin);
    Json bc = Json::array();
    for (const auto& c : log.boundary_certificates) bc.push_back(certificate_to_json(c));
    out["boundary_certificates"] = std::move(bc);
  }
  Json interior = Json::array();
  for (const auto& r : log.interior)
    interior.push_back({{"round", r.round},
                        {"d", to_json(r.d)},
                        {"bound", to_json(r.bound)},
                        {"cut", cut_to_json(r.cut)},
                        {"restricted_rhs", to_json(r.restricted_rhs)},
                        {"rule", std::string(to_string(r.rule))},
                        {"certified", r.certified}});
  out["interior_cuts"] = std::move(interior);
  out["rounds"] = log.rounds;
  out["round_cap_hit"] = log.round_cap_hit;
  out["uncertified_final"] = log.uncertified_final;
  out["notes"] = log.notes;
  return out;
}

Json node_to_json(const ClosureResult& r) {
  Json out;
  out["body"] = polytope_to_json(r.body);
  out["closure"] = polytope_to_json(r.closure);
  Json cuts = Json::array();
  for (const auto& c : r.defining_cuts.cuts()) cuts.push_back(cut_to_json(c));
  out["cuts"] = std::move(cuts);
  out["upper_certificate_only"] = r.upper_certificate_only;
  Json children = Json::array();
  for (const auto& ch : r.children) {
    Json face{{"normal", to_json(ch.face.normal)}, {"offset", to_json(ch.face.offset)}};
    int f = field_of(ch.face.normal);
    if (f == 0) f = ch.face.offset.field();
    if (f != 0) face["field"] = f;
    children.push_back({{"face", std::move(face)}, {"result", node_to_json(*ch.result)}});
  }
  out["children"] = std::move(children);
  if (r.reduction) {
    const auto& rd = *r.reduction;
    Json s = Json::array(), u = Json::array();
    for (const auto& row : rd.s) s.push_back(to_json(row));
    for (const auto& row : rd.u) u.push_back(to_json(row));
    out["reduction"] = {{"rank", rd.rank}, {"s", std::move(s)}, {"u", std::move(u)}, {"y1", to_json(rd.y1)},
                        {"base", to_json(rd.base)}};
  }
  if (r.reduced) out["reduced"] = node_to_json(*r.reduced);
  return out;
}

ClosureResult node_from_json(const Json& j) {
  ClosureResult r;
  const Json& body = field_at(j, "body");
  const Json& closure = field_at(j, "closure");
  size_t n = field_at(body, "ambient_dim").get<size_t>();
  r.body = body.value("empty", false) ? Polytope::empty(n) : polytope_from_json(body, n);
  r.closure = closure.value("empty", false) ? Polytope::empty(n) : polytope_from_json(closure, n);
  for (const auto& c : field_at(j, "cuts")) r.defining_cuts.insert(cut_from_json(c));
  if (j.contains("upper_certificate_only")) r.upper_certificate_only = j.at("upper_certificate_only").get<bool>();
  if (j.contains("children"))
    for (const auto& ch : j.at("children")) {
      const Json& face = field_at(ch, "face");
      int f = field_index(face);
      Face fc{qvec_from_json(field_at(face, "normal"), f), quad_from_json(field_at(face, "offset"), f), {}};
      r.children.push_back({std::move(fc), std::make_shared<ClosureResult>(node_from_json(field_at(ch, "result")))});
    }
  if (j.contains("reduction")) {
    const Json& rj = j.at("reduction");
    Reduction rd;
    rd.rank = rj.at("rank").get<size_t>();
    for (const auto& row : rj.at("s")) rd.s.push_back(zvec_from_json(row));
    for (const auto& row : rj.at("u")) rd.u.push_back(zvec_from_json(row));
    rd.y1 = zvec_from_json(rj.at("y1"));
    rd.base = zvec_from_json(rj.at("base"));
    r.reduction = std::move(rd);
  }
  if (j.contains("reduced")) r.reduced = std::make_shared<ClosureResult>(node_from_json(j.at("reduced")));
  return r;
}

}  // namespace

Json closure_to_json(const ClosureResult& r, const ResultOptions& opts) {
  Json out;
  out["mode"] = "exact";
  Json node = node_to_json(r);
  for (auto& [key, value] : node.items()) out[key] = value;
  out["certificate_log"] = log_to_json(r.log, opts);
  if (opts.timing) out["timing_seconds"] = r.seconds;
  return out;
}

ClosureResult closure_from_json(const Json& j) {
  try {
    return node_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    schema(e.what());
  }
}

Json oracle_to_json(const OracleResult& r) {
  Json out;
  out["mode"] = "oracle";
  out["bound"] = r.bound;
  out["stability_checked"] = r.stability_checked;
  out["stable"] = r.stable;
  out["note"] = "intersection of CG cuts with |c|_inf <= bound; the closure itself when stable";
  out["closure"] = polytope_to_json(r.polytope);
  Json cuts = Json::array();
  for (size_t i : r.inserted) cuts.push_back(cut_to_json(r.cuts[i]));
  out["cuts"] = std::move(cuts);
  out["evaluated"] = r.cuts.size();
  return out;
}

Json report_to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"ok", r.ok()}, {"checks", std::move(checks)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace cgc
