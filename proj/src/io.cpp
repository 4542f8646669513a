#include "lmono/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lmono {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t size_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
    bad(std::string("field '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

const json& array_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) bad(std::string("field '") + key + "' must be an array");
  return v;
}

SymExps syms_from_json(const json& j) {
  if (!j.is_object()) bad("unit symbols must be an object");
  SymExps out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer()) bad("unit symbol exponent must be an integer");
    if (v.get<long>() != 0) out[k] = v.get<long>();
  }
  return out;
}

json syms_to_json(const SymExps& s) {
  json j = json::object();
  for (const auto& [k, v] : s) j[k] = v;
  return j;
}

RatVector ratvec_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  RatVector v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

json ratvec_to_json(const RatVector& v) {
  json j = json::array();
  for (const auto& q : v) j.push_back(rational_to_json(q));
  return j;
}

json level_to_json(const CompositeLevel& L) {
  json coords = json::array();
  for (const auto& c : L.coords) coords.push_back(ratvec_to_json(c));
  return {{"basis", descriptors_to_json(L.basis)}, {"coords", coords}};
}

CompositeLevel level_from_json(const json& j) {
  CompositeLevel L;
  L.basis = descriptors_from_json(array_field(j, "basis"));
  for (const auto& c : array_field(j, "coords")) L.coords.push_back(ratvec_from_json(c));
  return L;
}

json steps_to_json(const TransformSeq& seq) {
  json j = json::array();
  for (const auto& s : seq) j.push_back(step_to_json(s));
  return j;
}

TransformSeq steps_from_json(const json& j) {
  if (!j.is_array()) bad("steps must be an array");
  TransformSeq out;
  for (const auto& s : j) out.push_back(step_from_json(s));
  return out;
}

json series_to_json(const TruncatedSeries& s) {
  return {{"terms", poly_to_json(s.poly())}, {"trunc", s.trunc() ? json(*s.trunc()) : json(nullptr)}};
}

TruncatedSeries series_from_json(const json& j, std::size_t nvars) {
  const json& t = field(j, "trunc");
  std::optional<long> trunc;
  if (!t.is_null()) {
    if (!t.is_number_integer()) bad("trunc must be an integer or null");
    trunc = t.get<long>();
  }
  return TruncatedSeries(poly_from_json(field(j, "terms"), nvars), trunc);
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  bad("rational must be a \"p/q\" string or an integer");
}

json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return to_string(z);
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    const Rational q = parse_rational(j.get<std::string>());
    if (!is_integral(q)) bad("expected an integer, got " + j.get<std::string>());
    return q.get_num();
  }
  bad("expected an integer");
}

json matrix_to_json(const IntMatrix& A) {
  json j = json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < A.cols(); ++k) row.push_back(integer_to_json(A(i, k)));
    j.push_back(row);
  }
  return j;
}

IntMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  std::vector<IntVector> rows;
  for (const auto& r : j) {
    if (!r.is_array()) bad("matrix row must be an array");
    IntVector row;
    for (const auto& e : r) row.push_back(integer_from_json(e));
    if (!rows.empty() && row.size() != rows.front().size()) bad("matrix rows have different lengths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return IntMatrix(0, 0);
  return IntMatrix::from_rows(rows);
}

json descriptors_to_json(const std::vector<GeneratorDescriptor>& b) {
  json j = json::array();
  for (const auto& g : b) {
    if (g.kind == GeneratorDescriptor::Kind::One)
      j.push_back({{"kind", "one"}});
    else
      j.push_back({{"kind", "sqrt"}, {"n", integer_to_json(g.n)}});
  }
  return j;
}

std::vector<GeneratorDescriptor> descriptors_from_json(const json& j) {
  if (!j.is_array()) bad("basis must be an array of descriptors");
  std::vector<GeneratorDescriptor> out;
  for (const auto& g : j) {
    const json& kind = field(g, "kind");
    if (kind == "one") {
      out.push_back(GeneratorDescriptor::one());
    } else if (kind == "sqrt") {
      GeneratorDescriptor d;
      d.n = integer_from_json(field(g, "n"));
      out.push_back(d);
    } else {
      bad("unknown basis descriptor kind");
    }
  }
  try {
    EmbeddingBasis check(out);
  } catch (const Error& e) {
    bad(std::string("invalid embedding basis: ") + e.what());
  }
  return out;
}

json unit_to_json(const UnitExpr& u) { return {{"scalar", rational_to_json(u.scalar())}, {"syms", syms_to_json(u.syms())}}; }

UnitExpr unit_from_json(const json& j) {
  if (j.is_string() || j.is_number_integer()) return UnitExpr(rational_from_json(j));
  const Rational s = rational_from_json(field(j, "scalar"));
  if (s == 0) bad("unit scalar must be nonzero");
  return UnitExpr(s, j.contains("syms") ? syms_from_json(j.at("syms")) : SymExps{});
}

json poly_to_json(const Poly& p) {
  json j = json::array();
  for (const auto& [k, c] : p.terms()) {
    json t = {{"c", rational_to_json(c)}, {"e", k.e}};
    if (!k.u.empty()) t["u"] = syms_to_json(k.u);
    j.push_back(t);
  }
  return j;
}

Poly poly_from_json(const json& j, std::size_t nvars) {
  if (j.is_string()) {
    try {
      return parse_poly(j.get<std::string>(), nvars);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  if (!j.is_array()) bad("poly must be a string or an array of terms");
  Poly p(nvars);
  for (const auto& t : j) {
    const json& e = field(t, "e");
    if (!e.is_array() || e.size() != nvars) bad("term exponent length must equal n");
    Monomial m;
    for (const auto& x : e) {
      if (!x.is_number_integer() || x.get<long>() < 0) bad("term exponents must be nonnegative integers");
      m.push_back(x.get<long>());
    }
    p.add_term(m, t.contains("u") ? syms_from_json(t.at("u")) : SymExps{}, rational_from_json(field(t, "c")));
  }
  return p;
}

json step_to_json(const TransformStep& s) {
  if (s.kind == TransformStep::Kind::TypeI) return {{"kind", "I"}, {"A", matrix_to_json(s.A)}};
  json j = {{"kind", "II"}, {"r", s.r}, {"A", matrix_to_json(s.A)}, {"c", rational_to_json(s.c.scalar())}};
  if (!s.c.syms().empty()) j["c_units"] = syms_to_json(s.c.syms());
  return j;
}

TransformStep step_from_json(const json& j) {
  const json& kind = field(j, "kind");
  IntMatrix A = matrix_from_json(field(j, "A"));
  if (A.rows() != A.cols()) bad("step matrix must be square");
  if (kind == "I") return TransformStep::type_I(std::move(A));
  if (kind != "II") bad("step kind must be \"I\" or \"II\"");
  const Rational c = rational_from_json(field(j, "c"));
  if (c == 0) bad("type II constant must be nonzero");
  SymExps u = j.contains("c_units") ? syms_from_json(j.at("c_units")) : SymExps{};
  return TransformStep::type_II(size_field(j, "r"), std::move(A), UnitExpr(c, std::move(u)));
}

json value_to_json(const Value& v) { return ratvec_to_json(v.coords()); }

json problem_to_json(const ExtensionProblem& p) {
  json rows = json::array();
  for (const auto& r : p.rows) {
    if (r.kind == ProblemRow::Kind::Tail)
      rows.push_back({{"tail", r.y}});
    else
      rows.push_back({{"poly", poly_to_json(r.f.poly())}, {"unit", unit_to_json(r.unit)}});
  }
  json yv = json::array();
  for (const auto& c : p.yvals) yv.push_back(ratvec_to_json(c));
  json j = {{"schema", kProblemSchema}, {"name", p.name},   {"m", p.m},          {"n", p.n},
            {"basis", descriptors_to_json(p.basis)}, {"yvals", yv}, {"rows", rows},
            {"t_steps", steps_to_json(p.t_steps)}};
  if (p.trunc) j["trunc"] = *p.trunc;
  if (p.composite) {
    json u = json::array(), t = json::array();
    for (const auto& L : p.composite->u_levels) u.push_back(level_to_json(L));
    for (const auto& L : p.composite->t_levels) t.push_back(level_to_json(L));
    j["composite"] = {{"u_levels", u}, {"t_levels", t}};
  }
  return j;
}

ExtensionProblem problem_from_json(const json& j) {
  try {
    if (!j.is_object()) bad("problem must be a JSON object");
    if (j.contains("schema") && j.at("schema") != kProblemSchema) bad("unsupported problem schema");
    ExtensionProblem p;
    p.name = j.contains("name") ? j.at("name").get<std::string>() : "";
    p.m = size_field(j, "m");
    p.n = size_field(j, "n");
    p.basis = descriptors_from_json(array_field(j, "basis"));
    for (const auto& c : array_field(j, "yvals")) {
      RatVector v = ratvec_from_json(c);
      if (v.size() != p.basis.size()) bad("value coordinates must match the basis dimension");
      p.yvals.push_back(std::move(v));
    }
    if (j.contains("trunc") && !j.at("trunc").is_null()) {
      if (!j.at("trunc").is_number_integer() || j.at("trunc").get<long>() <= 0)
        bad("trunc must be a positive integer");
      p.trunc = j.at("trunc").get<long>();
    }
    for (const auto& r : array_field(j, "rows")) {
      ProblemRow row;
      if (r.contains("tail")) {
        row.kind = ProblemRow::Kind::Tail;
        row.y = size_field(r, "tail");
      } else {
        row.f = TruncatedSeries(poly_from_json(field(r, "poly"), p.n), p.trunc);
        row.unit = r.contains("unit") ? unit_from_json(r.at("unit")) : UnitExpr();
      }
      p.rows.push_back(std::move(row));
    }
    if (j.contains("t_steps")) p.t_steps = steps_from_json(j.at("t_steps"));
    if (j.contains("composite")) {
      CompositeDecl cd;
      const json& c = j.at("composite");
      if (c.contains("u_levels"))
        for (const auto& L : array_field(c, "u_levels")) cd.u_levels.push_back(level_from_json(L));
      if (c.contains("t_levels"))
        for (const auto& L : array_field(c, "t_levels")) cd.t_levels.push_back(level_from_json(L));
      p.composite = std::move(cd);
    }
    return p;
  } catch (const json::exception& e) {
    bad(std::string("problem JSON has the wrong shape: ") + e.what());
  }
}

std::string problem_hash(const ExtensionProblem& p) {
  const std::string s = problem_to_json(p).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

json report_to_json(const Report& r) {
  json items = json::array();
  for (const auto& it : r.items) items.push_back({{"name", it.name}, {"ok", it.ok}, {"detail", it.detail}});
  return {{"ok", r.ok()}, {"items", items}};
}

json certificate_to_json(const Certificate& c) {
  const MonomialForm& F = c.final_form;
  json phis = json::array();
  for (const auto& u : F.phis) phis.push_back(unit_to_json(u));
  json deltas = json::object();
  for (const auto& [k, d] : F.deltas) deltas[k] = series_to_json(d);
  json tails = json::array();
  for (const auto& [x, y] : F.tails) tails.push_back({x, y});
  json checks = json::object();
  for (const auto& [k, v] : c.checks) checks[k] = v;
  json meta = json::object();
  for (const auto& [k, v] : c.metadata) meta[k] = v;
  json j = {{"schema", kCertSchema},
            {"problem", problem_to_json(c.problem)},
            {"problem_hash", c.problem_hash},
            {"status", c.solved ? "SOLVED" : "FAILED"},
            {"t_steps", steps_to_json(c.t_steps)},
            {"u_steps", steps_to_json(c.u_steps)},
            {"final",
             {{"rbar", F.rbar},
              {"sbar", F.sbar},
              {"l", F.l},
              {"C", matrix_to_json(F.C)},
              {"phis", phis},
              {"deltas", deltas},
              {"tails", tails}}},
            {"checks", checks},
            {"metadata", meta}};
  if (!c.solved) j["failure"] = c.failure;
  return j;
}

Certificate certificate_from_json(const json& j) {
  try {
    if (!j.is_object()) bad("certificate must be a JSON object");
    if (field(j, "schema") != kCertSchema) bad("unsupported certificate schema");
    Certificate c;
    c.problem = problem_from_json(field(j, "problem"));
    c.problem_hash = field(j, "problem_hash").get<std::string>();
    const json& st = field(j, "status");
    if (st != "SOLVED" && st != "FAILED") bad("status must be SOLVED or FAILED");
    c.solved = st == "SOLVED";
    if (j.contains("failure")) c.failure = j.at("failure").get<std::string>();
    c.t_steps = steps_from_json(field(j, "t_steps"));
    c.u_steps = steps_from_json(field(j, "u_steps"));
    const json& f = field(j, "final");
    MonomialForm& F = c.final_form;
    F.rbar = size_field(f, "rbar");
    F.sbar = size_field(f, "sbar");
    F.l = size_field(f, "l");
    F.C = matrix_from_json(field(f, "C"));
    if (F.C.rows() == 0) F.C = IntMatrix(0, F.sbar);
    for (const auto& u : array_field(f, "phis")) F.phis.push_back(unit_from_json(u));
    const json& d = field(f, "deltas");
    if (!d.is_object()) bad("deltas must be an object");
    for (const auto& [k, v] : d.items()) F.deltas.emplace(k, series_from_json(v, c.problem.n));
    for (const auto& t : array_field(f, "tails")) {
      if (!t.is_array() || t.size() != 2) bad("tail entries must be [x, y] pairs");
      F.tails.emplace_back(t[0].get<std::size_t>(), t[1].get<std::size_t>());
    }
    if (j.contains("checks"))
      for (const auto& [k, v] : j.at("checks").items()) c.checks[k] = v.get<bool>();
    if (j.contains("metadata"))
      for (const auto& [k, v] : j.at("metadata").items()) c.metadata[k] = v.get<std::string>();
    return c;
  } catch (const json::exception& e) {
    bad(std::string("certificate JSON has the wrong shape: ") + e.what());
  }
}

Certificate make_certificate(const ExtensionProblem& p, const SolveResult& r) {
  Certificate c;
  c.problem = p;
  c.problem_hash = problem_hash(p);
  c.solved = r.ok;
  c.failure = r.failure;
  c.t_steps = r.t_steps;
  c.u_steps = r.u_steps;
  c.final_form = r.final_form;
  c.metadata["generator"] = "lmono";
  c.metadata["field_tower"] = "residue field extensions collapsed to Q";
  c.metadata["verification_trunc"] = p.trunc ? std::to_string(*p.trunc + 2) : "exact";
  if (r.ok) {
    const Report rep = check_certificate(c, c.problem_hash);
    for (const auto& it : rep.items) c.checks[it.name] = it.ok;
  }
  return c;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace lmono
