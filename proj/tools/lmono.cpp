#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "lmono/certify.hpp"
#include "lmono/cosets.hpp"
#include "lmono/cuts.hpp"
#include "lmono/io.hpp"
#include "lmono/lattice.hpp"
#include "lmono/perron.hpp"

using namespace lmono;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitMalformed = 2;

struct ParsedValues {
  std::vector<GeneratorDescriptor> basis;
  std::vector<RatVector> coords;
};

// "sqrt2,3/2*sqrt3+sqrt5,1/7": each item is a sum of c*sqrtN or c terms.
ParsedValues parse_values(const std::string& text) {
  std::vector<std::vector<std::pair<Rational, long>>> items;
  std::vector<long> gens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::vector<std::pair<Rational, long>> terms;
    std::string cur;
    auto flush = [&] {
      if (cur.empty()) throw ParseError("empty value term in '" + text + "'");
      Rational c = 1;
      long g = 1;
      std::string t = cur;
      const auto pos = t.find("sqrt");
      if (pos != std::string::npos) {
        g = std::stol(t.substr(pos + 4));
        t = t.substr(0, pos);
        if (!t.empty() && t.back() == '*') t.pop_back();
        if (t.empty() || t == "+") t = "1";
        if (t == "-") t = "-1";
      }
      c = parse_rational(t);
      terms.emplace_back(c, g);
      if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
      cur.clear();
    };
    for (char ch : item) {
      if (ch == ' ') continue;
      if ((ch == '+' || ch == '-') && !cur.empty() && cur.back() != '*' && cur.back() != '/') flush();
      cur += ch;
    }
    flush();
    items.push_back(std::move(terms));
  }
  std::sort(gens.begin(), gens.end());
  ParsedValues out;
  for (long g : gens) out.basis.push_back(g == 1 ? GeneratorDescriptor::one() : GeneratorDescriptor::sqrt(g));
  for (const auto& terms : items) {
    RatVector v(gens.size());
    for (const auto& [c, g] : terms) v[std::find(gens.begin(), gens.end(), g) - gens.begin()] += c;
    out.coords.push_back(std::move(v));
  }
  return out;
}

IntMatrix parse_matrix(const std::string& text) { return matrix_from_json(parse_json_text(text)); }

IntVector parse_intvec(const std::string& text) {
  const json j = parse_json_text(text);
  if (!j.is_array()) throw ParseError("expected a JSON array of integers");
  IntVector v;
  for (const auto& e : j) v.push_back(integer_from_json(e));
  return v;
}

json ratvecs_json(const std::vector<RatVector>& vs) {
  json j = json::array();
  for (const auto& v : vs) {
    json row = json::array();
    for (const auto& q : v) row.push_back(rational_to_json(q));
    j.push_back(row);
  }
  return j;
}

void emit(const json& j, const std::string& format, const std::string& text) {
  if (format == "json")
    std::cout << dump(j);
  else
    std::cout << text;
}

std::string matrix_text(const IntMatrix& A) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < A.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t k = 0; k < A.cols(); ++k) os << (k ? ", " : "") << to_string(A(i, k));
    os << ']';
  }
  os << ']';
  return os.str();
}

ExtensionProblem random_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  ExtensionProblem p;
  p.name = "gen-" + std::to_string(seed);
  const std::size_t rbar = pick(1, 2), sbar = pick(rbar, 3), l = pick(0, 1);
  p.m = rbar + l;
  p.n = sbar + l;
  p.basis = {GeneratorDescriptor::sqrt(2), GeneratorDescriptor::sqrt(3), GeneratorDescriptor::sqrt(5)};
  for (std::size_t j = 0; j < sbar; ++j) {
    RatVector v(3);
    v[j] = Rational(pick(1, 5), pick(1, 3));
    v[j].canonicalize();
    p.yvals.push_back(v);
  }
  IntMatrix C0(rbar, sbar);
  do {
    for (std::size_t i = 0; i < rbar; ++i)
      for (std::size_t j = 0; j < sbar; ++j) C0(i, j) = pick(0, 2);
  } while (rank(C0) != rbar);
  for (std::size_t i = 0; i < rbar; ++i) {
    Monomial lead(p.n, 0);
    for (std::size_t j = 0; j < sbar; ++j) lead[j] = to_int64(C0(i, j));
    Poly tail = Poly::constant(p.n, 1);
    for (long k = pick(0, 2); k > 0; --k) {
      Monomial e(p.n, 0);
      e[pick(0, static_cast<long>(sbar) - 1)] = pick(1, 2);
      tail.add_term(e, {}, Rational(pick(1, 4)));
    }
    ProblemRow row;
    row.f = TruncatedSeries(Poly::monomial(p.n, lead) * tail, p.trunc);
    row.unit = UnitExpr(Rational(pick(1, 3)));
    p.rows.push_back(row);
  }
  for (std::size_t j = 0; j < l; ++j) {
    ProblemRow row;
    row.kind = ProblemRow::Kind::Tail;
    row.y = sbar + j + 1;
    p.rows.push_back(row);
  }
  return p;
}

std::string solve_summary(const Certificate& c, const Report& rep) {
  std::ostringstream os;
  os << "problem " << (c.problem.name.empty() ? "(unnamed)" : c.problem.name) << " " << c.problem_hash << '\n';
  os << "status " << (c.solved ? "SOLVED" : "FAILED") << '\n';
  if (!c.solved) os << "failure " << c.failure << '\n';
  os << "T-side steps " << c.t_steps.size() << ", U-side steps " << c.u_steps.size() << '\n';
  os << "final C " << matrix_text(c.final_form.C) << ", rank " << rank(c.final_form.C) << '\n';
  for (const auto& [name, d] : c.final_form.deltas) os << name << " = " << d.poly().to_string() << '\n';
  if (c.solved) os << rep.to_text();
  return os.str();
}

int run_solve(const std::string& path, const std::string& out, std::optional<long> trunc, std::size_t cap,
              const std::string& format) {
  ExtensionProblem p;
  try {
    p = problem_from_json(load_json_file(path));
    if (trunc) {
      p.trunc = *trunc;
      for (auto& r : p.rows)
        if (r.kind == ProblemRow::Kind::Series) r.f = TruncatedSeries(r.f.poly(), p.trunc);
    }
    check_admissible(p);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMalformed;
  }
  const SolveResult res = run_monomialization(p, cap);
  const Certificate cert = make_certificate(p, res);
  const Report rep = res.ok ? check_certificate(cert, cert.problem_hash) : Report{};
  const json cj = certificate_to_json(cert);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write " << out << '\n';
      return kExitFail;
    }
    f << dump(cj);
    std::cout << solve_summary(cert, rep);
  } else {
    emit(cj, format, solve_summary(cert, rep));
  }
  return res.ok && rep.ok() ? kExitPass : kExitFail;
}

struct CheckOutcome {
  int code = kExitPass;
  std::string text;
  json j;
};

CheckOutcome check_one(const std::string& path) {
  CheckOutcome o;
  Certificate c;
  try {
    c = certificate_from_json(load_json_file(path));
  } catch (const Error& e) {
    o.code = kExitMalformed;
    o.text = path + ": malformed: " + e.what() + "\n";
    o.j = {{"file", path}, {"malformed", e.what()}};
    return o;
  }
  const Report rep = check_certificate(c, problem_hash(c.problem));
  o.code = rep.ok() ? kExitPass : kExitFail;
  o.text = path + "\n" + rep.to_text();
  o.j = report_to_json(rep);
  o.j["file"] = path;
  return o;
}

int run_check(const std::vector<std::string>& paths, std::size_t jobs, const std::string& format) {
  std::vector<CheckOutcome> outs(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) outs[i] = check_one(paths[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, std::min(jobs, paths.size())); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = kExitPass;
  json all = json::array();
  std::string text;
  for (const auto& o : outs) {
    code = std::max(code, o.code);
    all.push_back(o.j);
    text += o.text;
  }
  emit(paths.size() == 1 ? all[0] : all, format, text);
  return code;
}

int run_perron(const std::string& vals_text, std::size_t steps, const std::string& format) {
  const ParsedValues pv = parse_values(vals_text);
  const auto basis = EmbeddingBasis::make(pv.basis);
  std::vector<Value> vals;
  for (const auto& c : pv.coords) vals.emplace_back(basis, c);
  json js = json::array();
  std::ostringstream os;
  for (std::size_t k = 0; k < steps; ++k) {
    auto st = perron_step(vals);
    vals = std::move(st.vals);
    json vj = json::array();
    os << "step " << k + 1 << " A = " << matrix_text(st.step.A) << "\n  values:";
    for (const auto& v : vals) {
      vj.push_back(value_to_json(v));
      os << ' ' << v.to_string();
    }
    os << '\n';
    js.push_back({{"A", matrix_to_json(st.step.A)}, {"values", vj}});
  }
  emit({{"basis", descriptors_to_json(pv.basis)}, {"steps", js}}, format, os.str());
  return kExitPass;
}

int run_lattice(const std::string& Ctext, const std::string& lambda_text, bool hilbert, const std::string& format) {
  const IntMatrix C = parse_matrix(Ctext);
  const PreimageLattice g = preimage_lattice(C);
  json j = {{"index", integer_to_json(g.index)}, {"basis", ratvecs_json(g.basis.to_rows())}};
  json d = json::array();
  for (const auto& x : g.divisors) d.push_back(integer_to_json(x));
  j["divisors"] = d;
  std::ostringstream os;
  os << "index " << to_string(g.index) << '\n';
  for (const auto& r : g.basis.to_rows()) {
    os << "basis";
    for (const auto& q : r) os << ' ' << to_string(q);
    os << '\n';
  }
  if (hilbert) {
    j["hilbert_H"] = ratvecs_json(hilbert_basis(C, SemigroupKind::H).hilbert);
    j["hilbert_I"] = ratvecs_json(hilbert_basis(C, SemigroupKind::I).hilbert);
    os << "H " << j["hilbert_H"].dump() << "\nI " << j["hilbert_I"].dump() << '\n';
  }
  if (!lambda_text.empty()) {
    const ModuleGens mg = module_generators(C, parse_intvec(lambda_text));
    j["module_generators"] = ratvecs_json(mg.gens);
    os << "M_lambda generators " << j["module_generators"].dump() << '\n';
  }
  emit(j, format, os.str());
  return kExitPass;
}

int run_decompose(const std::string& Ctext, const std::string& poly_text, const std::string& vals_text,
                  std::size_t nvars, const std::string& format) {
  const IntMatrix C = parse_matrix(Ctext);
  const std::size_t n = nvars ? nvars : C.cols();
  const Poly f = parse_poly(poly_text, n);
  const auto parts = decompose(f, C);
  json classes = json::array();
  std::ostringstream os;
  for (const auto& [cls, part] : parts) {
    json key = json::array();
    for (const auto& z : cls.key) key.push_back(integer_to_json(z));
    classes.push_back({{"class", key}, {"poly", poly_to_json(part)}, {"text", part.to_string()}});
    os << "class " << key.dump() << ": " << part.to_string() << '\n';
  }
  json j = {{"classes", classes}};
  if (!vals_text.empty()) {
    const ParsedValues pv = parse_values(vals_text);
    const auto basis = EmbeddingBasis::make(pv.basis);
    std::vector<Value> vals;
    for (const auto& c : pv.coords) vals.emplace_back(basis, c);
    const MinClass mc = min_value_class(parts, vals);
    json key = json::array();
    for (const auto& z : mc.cls.key) key.push_back(integer_to_json(z));
    j["min_class"] = {{"class", key}, {"value", value_to_json(mc.value)}};
    os << "min class " << key.dump() << " value " << mc.value.to_string() << '\n';
  }
  emit(j, format, os.str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local monomialization of rational rank valuations on desk-scale extensions"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* solve = app.add_subcommand("solve", "Monomialize a problem and write a certificate");
  std::string solve_path, solve_out;
  std::optional<long> trunc;
  std::size_t cap = kPerronCap;
  solve->add_option("problem", solve_path, "Problem JSON")->required();
  solve->add_option("-o,--out", solve_out, "Certificate output path");
  solve->add_option("--trunc", trunc, "Override the truncation degree");
  solve->add_option("--max-steps", cap, "Perron steps per normalization");

  auto* check = app.add_subcommand("check", "Verify certificates");
  std::vector<std::string> cert_paths;
  std::size_t jobs = 1;
  check->add_option("certs", cert_paths, "Certificate JSON files")->required();
  check->add_option("--jobs", jobs, "Parallel verifications");

  auto* perron = app.add_subcommand("perron", "Run Perron steps on values");
  std::string vals;
  std::size_t steps = 1;
  perron->add_option("--vals", vals, "Comma separated values, e.g. sqrt2,sqrt3")->required();
  perron->add_option("--steps", steps, "Number of steps");

  auto* lattice = app.add_subcommand("lattice", "Preimage lattice, semigroups and module generators");
  std::string Ctext, lambda;
  bool hilbert = false;
  lattice->add_option("--C", Ctext, "Matrix as JSON")->required();
  lattice->add_option("--lambda", lambda, "Lambda as JSON array");
  lattice->add_flag("--hilbert", hilbert, "Hilbert bases of H and I");

  auto* dec = app.add_subcommand("decompose", "Coset decomposition of a polynomial");
  std::string dC, dpoly, dvals;
  std::size_t dn = 0;
  dec->add_option("--C", dC, "Matrix as JSON")->required();
  dec->add_option("--poly", dpoly, "Polynomial in y1..yn")->required();
  dec->add_option("--vals", dvals, "Values of the graded variables");
  dec->add_option("--nvars", dn, "Number of variables (default: columns of C)");

  auto* gen = app.add_subcommand("gen", "Random admissible problem");
  std::uint64_t seed = 1;
  gen->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitPass : kExitMalformed;
  }

  try {
    if (*solve) return run_solve(solve_path, solve_out, trunc, cap, format);
    if (*check) return run_check(cert_paths, jobs, format);
    if (*perron) return run_perron(vals, steps, format);
    if (*lattice) return run_lattice(Ctext, lambda, hilbert, format);
    if (*dec) return run_decompose(dC, dpoly, dvals, dn, format);
    if (*gen) {
      std::cout << dump(problem_to_json(random_problem(seed)));
      return kExitPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitPass;
}
