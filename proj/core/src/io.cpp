#include "dudley/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dudley {

namespace {

using Json = nlohmann::ordered_json;

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth + 2), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        emit(value, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty() || is_flat(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double real(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.is_number_unsigned() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(v.get<std::int64_t>());
}

Json vec(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json opt(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Vector to_vector(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a nonempty array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<Vector> to_vectors(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of points");
  std::vector<Vector> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(to_vector(e));
  return out;
}

Json body_json(const Body& body) {
  Json j;
  if (const auto* ball = std::get_if<Ball>(&body)) {
    j["type"] = "ball";
    j["dim"] = ball->dim();
    j["center"] = vec(ball->center());
    j["radius"] = ball->radius();
  } else {
    const auto& P = std::get<VPolytope>(body);
    j["type"] = "vpolytope";
    j["dim"] = P.dim();
    Json vs = Json::array();
    for (const auto& v : P.vertices()) vs.push_back(vec(v));
    j["vertices"] = std::move(vs);
  }
  return j;
}

// Library validation errors in nested objects surface as parse errors.
template <class F>
auto checked(F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Body body_of(const Json& j) {
  return checked([&]() -> Body {
    const Json& type = field(j, "type");
    if (!type.is_string()) throw ParseError("body type must be a string");
    Body body = [&]() -> Body {
      if (type == "ball") return Ball(to_vector(field(j, "center")), real(j, "radius"));
      if (type == "vpolytope") return VPolytope(to_vectors(field(j, "vertices")));
      throw ParseError("unknown body type " + type.dump());
    }();
    if (j.contains("dim") && integer(j, "dim") != dim(body)) throw ParseError("body dim does not match its data");
    return body;
  });
}

Json hpoly_json(const HPolytope& P) {
  Json j;
  j["dim"] = P.dim();
  Json hs = Json::array();
  for (const auto& h : P.halfspaces()) {
    Json e;
    e["normal"] = vec(h.normal());
    e["offset"] = h.offset();
    hs.push_back(std::move(e));
  }
  j["halfspaces"] = std::move(hs);
  return j;
}

HPolytope hpoly_of(const Json& j) {
  return checked([&] {
    const Json& hs = field(j, "halfspaces");
    if (!hs.is_array() || hs.empty()) throw ParseError("halfspaces must be a nonempty array");
    std::vector<Halfspace> list;
    list.reserve(hs.size());
    for (const auto& e : hs) list.emplace_back(to_vector(field(e, "normal")), real(e, "offset"));
    HPolytope P(std::move(list));
    if (j.contains("dim") && integer(j, "dim") != P.dim()) throw ParseError("hpoly dim does not match its data");
    return P;
  });
}

Json packing_json(const SpherePacking& p) {
  Json j;
  j["dim"] = p.dim();
  j["center"] = vec(p.center());
  j["radius"] = p.radius();
  j["delta"] = p.delta();
  j["seed"] = p.seed();
  Json pts = Json::array();
  for (const auto& q : p.points()) pts.push_back(vec(q));
  j["points"] = std::move(pts);
  return j;
}

SpherePacking packing_of(const Json& j) {
  return checked([&] {
    SpherePacking p(to_vectors(field(j, "points")), to_vector(field(j, "center")), real(j, "radius"),
                    real(j, "delta"), integer(j, "seed"));
    if (j.contains("dim") && integer(j, "dim") != p.dim()) throw ParseError("packing dim does not match its data");
    return p;
  });
}

}  // namespace

std::string body_to_json(const Body& body) { return dump(body_json(body)); }
Body body_from_json(const std::string& text) { return body_of(parse(text)); }

std::string hpoly_to_json(const HPolytope& P) { return dump(hpoly_json(P)); }
HPolytope hpoly_from_json(const std::string& text) { return hpoly_of(parse(text)); }

std::string packing_to_json(const SpherePacking& packing) { return dump(packing_json(packing)); }
SpherePacking packing_from_json(const std::string& text) { return packing_of(parse(text)); }

std::string construction_to_json(const Construction& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["sphere_center"] = vec(c.sphere_center);
  j["sphere_radius"] = c.sphere_radius;
  j["scale"] = c.scale;
  j["projection_tol"] = c.projection_tol;
  j["body"] = body_json(c.body);
  j["packing"] = packing_json(c.packing);
  Json contacts = Json::array();
  for (const auto& k : c.contacts) {
    Json e;
    e["q"] = vec(k.q);
    e["nq"] = vec(k.nq);
    contacts.push_back(std::move(e));
  }
  j["contacts"] = std::move(contacts);
  j["result"] = hpoly_json(c.result);
  return dump(j);
}

Construction construction_from_json(const std::string& text) {
  const Json j = parse(text);
  return checked([&] {
    const Json& mode = field(j, "mode");
    if (!mode.is_string()) throw ParseError("mode must be a string");
    std::vector<Contact> contacts;
    const Json& cs = field(j, "contacts");
    if (!cs.is_array()) throw ParseError("contacts must be an array");
    for (const auto& e : cs) contacts.push_back({to_vector(field(e, "q")), to_vector(field(e, "nq"))});
    Construction c{body_of(field(j, "body")),
                   parse_mode(mode.get<std::string>()),
                   real(j, "epsilon"),
                   real(j, "delta"),
                   to_vector(field(j, "sphere_center")),
                   real(j, "sphere_radius"),
                   real(j, "scale"),
                   real(j, "projection_tol"),
                   packing_of(field(j, "packing")),
                   std::move(contacts),
                   hpoly_of(field(j, "result"))};
    const std::size_t d = dim(c.body);
    if (c.packing.dim() != d || c.result.dim() != d || static_cast<std::size_t>(c.sphere_center.size()) != d) {
      throw ParseError("construction parts disagree on dimension");
    }
    if (c.contacts.size() != c.packing.size() || c.result.size() != c.packing.size()) {
      throw ParseError("construction needs one contact and one halfspace per packing point");
    }
    return c;
  });
}

std::string report_to_json(const ApproximationReport& r) {
  Json j;
  j["halfspace_count"] = r.halfspace_count;
  j["delta"] = r.delta;
  j["epsilon"] = r.epsilon;
  j["dim"] = r.dim;
  j["mode"] = to_string(r.mode);
  j["seed"] = r.seed;
  j["sphere_radius"] = r.sphere_radius;
  j["theoretical_envelope"] = r.theoretical_envelope;
  j["envelope_ratio"] = r.envelope_ratio;
  j["containment_ok"] = r.containment_ok;
  j["containment_worst"] = r.containment_worst;
  j["bounded"] = r.bounded;
  j["hausdorff_estimate"] = r.hausdorff_estimate ? opt(*r.hausdorff_estimate) : Json(nullptr);
  j["hausdorff_directions"] = r.hausdorff_directions;
  j["hausdorff_certified"] = false;
  j["exact_gap"] = r.exact_gap ? Json(*r.exact_gap) : Json(nullptr);
  j["runtime_ms"] = r.runtime_ms;
  return dump(j);
}

std::string audit_to_json(const ProofAudit& a) {
  Json j;
  j["n_samples"] = a.n_samples;
  j["seed"] = a.seed;
  j["passed"] = a.passed();
  Json b;
  b["delta"] = a.bounds.delta;
  b["contraction_slack"] = a.bounds.contraction_slack;
  b["ell"] = a.bounds.ell;
  b["sin_gamma"] = a.bounds.sin_gamma;
  b["boundary"] = a.bounds.boundary;
  b["tolerance"] = kAuditTol;
  j["bounds"] = std::move(b);
  Json f;
  const char* names[5] = {"a_pprime_q", "b_contraction", "c_ell", "d_sin_gamma", "e_boundary"};
  for (std::size_t k = 0; k < 5; ++k) f[names[k]] = a.failures[k];
  j["failures"] = std::move(f);
  j["violations"] = a.violations;
  j["coverage_misses"] = a.coverage_misses;
  j["packing_reverified"] = a.packing_reverified ? Json(*a.packing_reverified) : Json(nullptr);
  Json recs = Json::array();
  for (const auto& r : a.records) {
    Json e;
    e["p"] = vec(r.p);
    e["v"] = vec(r.v);
    e["p_prime"] = vec(r.p_prime);
    e["q_index"] = r.q_index;
    e["q"] = vec(r.q);
    e["nq"] = vec(r.nq);
    e["gap_pprime_q"] = r.gap_pprime_q;
    e["gap_p_nq"] = r.gap_p_nq;
    e["ell"] = r.ell;
    e["sin_gamma"] = r.sin_gamma;
    e["dist_p_boundaryD"] = r.dist_p_boundary;
    recs.push_back(std::move(e));
  }
  j["samples"] = std::move(recs);
  return dump(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace dudley
