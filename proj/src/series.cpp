#include "lmono/series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lmono {

long degree(const Monomial& e) {
  long d = 0;
  for (long x : e) d += x;
  return d;
}

Monomial operator+(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) throw PreconditionError("monomial length mismatch");
  Monomial out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool divides(const Monomial& b, const Monomial& a) {
  if (a.size() != b.size()) throw PreconditionError("monomial length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] > a[i]) return false;
  return true;
}

void add_into(SymExps& acc, const SymExps& more, long times) {
  for (const auto& [name, e] : more) {
    long& slot = acc[name];
    slot += e * times;
    if (slot == 0) acc.erase(name);
  }
}

SymExps negate(const SymExps& s) {
  SymExps out;
  add_into(out, s, -1);
  return out;
}

UnitExpr::UnitExpr(Rational scalar, SymExps syms) : scalar_(std::move(scalar)), syms_(std::move(syms)) {
  if (scalar_ == 0) throw PreconditionError("unit expression with zero scalar");
  std::erase_if(syms_, [](const auto& kv) { return kv.second == 0; });
}

UnitExpr UnitExpr::symbol(const std::string& name, long exp) { return UnitExpr(Rational(1), SymExps{{name, exp}}); }

UnitExpr UnitExpr::inverse() const { return pow(-1); }

UnitExpr UnitExpr::pow(long k) const {
  Rational s = 1;
  mpz_pow_ui(s.get_num_mpz_t(), scalar_.get_num_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  mpz_pow_ui(s.get_den_mpz_t(), scalar_.get_den_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  s.canonicalize();
  if (k < 0) s = 1 / s;
  SymExps u;
  add_into(u, syms_, k);
  return UnitExpr(s, std::move(u));
}

UnitExpr operator*(const UnitExpr& a, const UnitExpr& b) {
  SymExps u = a.syms_;
  add_into(u, b.syms_);
  return UnitExpr(a.scalar_ * b.scalar_, std::move(u));
}

namespace {

std::string syms_to_string(const SymExps& u) {
  std::string out;
  for (const auto& [name, e] : u) {
    if (!out.empty()) out += "*";
    out += name;
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace

std::string UnitExpr::to_string() const {
  if (syms_.empty()) return lmono::to_string(scalar_);
  if (scalar_ == 1) return syms_to_string(syms_);
  return lmono::to_string(scalar_) + "*" + syms_to_string(syms_);
}

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Monomial(nvars, 0), {}, c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i) {
  if (i >= nvars) throw PreconditionError("variable index out of range");
  Monomial e(nvars, 0);
  e[i] = 1;
  return monomial(nvars, std::move(e));
}

Poly Poly::monomial(std::size_t nvars, Monomial e, const Rational& c, SymExps u) {
  if (e.size() != nvars) throw PreconditionError("monomial length does not match nvars");
  Poly p(nvars);
  p.add_term(e, u, c);
  return p;
}

Poly Poly::unit(std::size_t nvars, const UnitExpr& u) {
  Poly p(nvars);
  p.add_term(Monomial(nvars, 0), u.syms(), u.scalar());
  return p;
}

void Poly::add_term(const Monomial& e, const SymExps& u, const Rational& c) {
  if (c == 0) return;
  if (e.size() != nvars_) throw PreconditionError("term length does not match nvars");
  for (long x : e)
    if (x < 0) throw PreconditionError("negative variable exponent");
  Key k{e, u};
  std::erase_if(k.u, [](const auto& kv) { return kv.second == 0; });
  auto [it, fresh] = terms_.try_emplace(std::move(k), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

long Poly::max_degree() const {
  long d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, degree(k.e));
  return d;
}

long Poly::min_degree() const {
  long d = -1;
  for (const auto& [k, c] : terms_) {
    const long t = degree(k.e);
    if (d < 0 || t < d) d = t;
  }
  return d;
}

Poly Poly::truncated(long D) const {
  Poly out(nvars_);
  for (const auto& [k, c] : terms_)
    if (degree(k.e) < D) out.terms_.emplace(k, c);
  return out;
}

Poly Poly::constant_part() const {
  Poly out(nvars_);
  for (const auto& [k, c] : terms_)
    if (degree(k.e) == 0) out.terms_.emplace(k, c);
  return out;
}

Poly Poly::divide_monomial(const Monomial& d) const {
  if (d.size() != nvars_) throw PreconditionError("divisor length does not match nvars");
  Poly out(nvars_);
  for (const auto& [k, c] : terms_) {
    if (!divides(d, k.e)) throw PreconditionError("term is not divisible by the monomial");
    Key q = k;
    for (std::size_t i = 0; i < nvars_; ++i) q.e[i] -= d[i];
    out.terms_.emplace(std::move(q), c);
  }
  return out;
}

Poly Poly::extended(std::size_t nvars) const {
  if (nvars < nvars_) throw PreconditionError("cannot shrink the variable set");
  Poly out(nvars);
  for (const auto& [k, c] : terms_) {
    Key q = k;
    q.e.resize(nvars, 0);
    out.terms_.emplace(std::move(q), c);
  }
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw PreconditionError("poly sum: nvars mismatch");
  Poly out = a;
  for (const auto& [k, c] : b.terms_) out.add_term(k.e, k.u, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) { return multiply(a, b, std::nullopt); }

Poly operator*(const Rational& k, const Poly& p) {
  Poly out(p.nvars());
  if (k == 0) return out;
  for (const auto& [key, c] : p.terms()) out.add_term(key.e, key.u, k * c);
  return out;
}

Poly multiply(const Poly& a, const Poly& b, std::optional<long> trunc) {
  if (a.nvars() != b.nvars()) throw PreconditionError("poly product: nvars mismatch");
  Poly out(a.nvars());
  for (const auto& [ka, ca] : a.terms()) {
    const long da = degree(ka.e);
    if (trunc && da >= *trunc) continue;
    for (const auto& [kb, cb] : b.terms()) {
      if (trunc && da + degree(kb.e) >= *trunc) continue;
      SymExps u = ka.u;
      add_into(u, kb.u);
      out.add_term(ka.e + kb.e, u, ca * cb);
    }
  }
  return out;
}

Poly power(const Poly& p, unsigned k, std::optional<long> trunc) {
  Poly result = Poly::constant(p.nvars(), 1);
  Poly base = trunc ? p.truncated(*trunc) : p;
  while (k) {
    if (k & 1) result = multiply(result, base, trunc);
    k >>= 1;
    if (k) base = multiply(base, base, trunc);
  }
  return result;
}

std::string Poly::to_string(const std::string& prefix) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (k.e[i] == 0) continue;
      std::string f = prefix + std::to_string(i + 1);
      if (k.e[i] != 1) f += "^" + std::to_string(k.e[i]);
      factors.push_back(f);
    }
    if (!k.u.empty()) factors.push_back(syms_to_string(k.u));
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (mag != 1 || factors.empty()) {
      os << lmono::to_string(mag);
      need_star = true;
    }
    for (const auto& f : factors) {
      if (need_star) os << "*";
      os << f;
      need_star = true;
    }
  }
  return os.str();
}

namespace {

class PolyParser {
public:
  PolyParser(std::string_view s, std::size_t nvars, const std::string& prefix)
      : s_(s), nvars_(nvars), prefix_(prefix) {}

  Poly parse() {
    Poly out(nvars_);
    skip();
    if (pos_ == s_.size()) throw ParseError("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      term(out, sign);
      skip();
    }
    return out;
  }

private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial: " + what + " at offset " + std::to_string(pos_));
  }

  bool at_factor() const {
    if (pos_ >= s_.size()) return false;
    const char ch = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '*';
  }

  long exponent() {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '^') return 1;
    ++pos_;
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string digits(s_.substr(start, pos_ - start));
    if (digits.empty() || digits == "-" || digits == "+") fail("missing exponent");
    return std::stol(digits);
  }

  void term(Poly& out, int sign) {
    Rational coef = sign;
    Monomial e(nvars_, 0);
    SymExps u;
    bool any = false;
    while (true) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        if (!any) fail("dangling '*'");
        ++pos_;
        skip();
      } else if (!at_factor()) {
        break;
      }
      const char ch = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '/') {
          ++pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        coef *= parse_rational(s_.substr(start, pos_ - start));
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
          ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        const long k = exponent();
        if (auto idx = variable_index(name)) {
          if (k < 0) fail("negative exponent on variable " + name);
          e[*idx] += k;
        } else {
          u[name] += k;
        }
      } else {
        fail("unexpected character");
      }
      any = true;
    }
    if (!any) fail("empty term");
    out.add_term(e, u, coef);
  }

  std::optional<std::size_t> variable_index(const std::string& name) const {
    if (name.size() <= prefix_.size() || name.compare(0, prefix_.size(), prefix_) != 0) return std::nullopt;
    const std::string digits = name.substr(prefix_.size());
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return std::nullopt;
    const unsigned long idx = std::stoul(digits);
    if (idx == 0 || idx > nvars_)
      throw ParseError("polynomial: variable " + name + " outside 1.." + std::to_string(nvars_));
    return idx - 1;
  }

  std::string_view s_;
  std::size_t nvars_;
  std::string prefix_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, std::size_t nvars, const std::string& prefix) {
  return PolyParser(text, nvars, prefix).parse();
}

std::optional<long> min_trunc(std::optional<long> a, std::optional<long> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

TruncatedSeries::TruncatedSeries(Poly poly, std::optional<long> trunc)
    : poly_(trunc ? poly.truncated(*trunc) : std::move(poly)), trunc_(trunc) {
  if (trunc_ && *trunc_ < 0) throw PreconditionError("negative truncation degree");
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return TruncatedSeries(a.poly_ + b.poly_, min_trunc(a.trunc_, b.trunc_));
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  const auto t = min_trunc(a.trunc_, b.trunc_);
  return TruncatedSeries(multiply(a.poly_, b.poly_, t), t);
}

bool is_unit(const Poly& f) { return !f.constant_part().is_zero(); }

bool is_unit(const TruncatedSeries& f) {
  if (f.trunc() && *f.trunc() == 0) return false;
  return is_unit(f.poly());
}

Poly inverse_unit(const Poly& f, long D) {
  const Poly c0 = f.constant_part();
  if (c0.size() != 1) throw PreconditionError("inverse_unit: constant part must be a single nonzero term");
  const auto& [key, c] = *c0.terms().begin();
  const Poly c0_inv = Poly::monomial(f.nvars(), key.e, 1 / c, negate(key.u));
  // f = c0 (1 + g), 1/f = c0^-1 sum (-g)^k
  const Poly g = multiply(c0_inv, f, D) - Poly::constant(f.nvars(), 1);
  Poly sum = Poly::constant(f.nvars(), 1);
  Poly term = sum;
  for (long k = 1; k < D; ++k) {
    term = multiply(term, -g, D);
    if (term.is_zero()) break;
    sum = sum + term;
  }
  return multiply(c0_inv, sum, D);
}

Value monomial_value(const Monomial& e, std::span<const Value> vals) {
  if (vals.empty()) throw PreconditionError("monomial_value needs at least one value for the basis");
  if (e.size() < vals.size()) throw PreconditionError("monomial shorter than the value list");
  Value acc = Value::zero(vals.front().basis());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (i >= vals.size()) throw PreconditionError("monomial involves a variable of infinite value");
    acc = acc + Rational(e[i]) * vals[i];
  }
  return acc;
}

namespace {

bool involves_trailing(const Monomial& e, std::size_t graded) {
  for (std::size_t i = graded; i < e.size(); ++i)
    if (e[i] != 0) return true;
  return false;
}

void check_vals(std::size_t nvars, std::span<const Value> vals) {
  if (vals.size() > nvars) throw PreconditionError("gauss_value: more values than variables");
  for (const auto& v : vals)
    if (v.sign() <= 0) throw PreconditionError("gauss_value: values must be positive");
}

}  // namespace

GaussValue gauss_value(const Poly& f, std::span<const Value> vals) {
  check_vals(f.nvars(), vals);
  GaussValue best;
  for (const auto& [k, c] : f.terms()) {
    if (involves_trailing(k.e, vals.size())) continue;
    if (vals.empty()) {
      // Only the constant term can be finite; it has value 0 over no basis.
      throw PreconditionError("gauss_value: a finite value needs a basis");
    }
    Value v = monomial_value(k.e, vals);
    if (!best.finite() || cmp(v, best.value) == std::strong_ordering::less) {
      best.kind = GaussValue::Kind::Finite;
      best.value = std::move(v);
      best.argmin = k.e;
    }
  }
  return best;
}

GaussValue gauss_value(const TruncatedSeries& f, std::span<const Value> vals,
                       const std::optional<Value>& known_floor) {
  GaussValue g = gauss_value(f.poly(), vals);
  if (!f.trunc()) return g;
  if (vals.empty()) {
    g.kind = GaussValue::Kind::AboveTruncation;
    return g;
  }
  Value least = vals.front();
  for (const auto& v : vals)
    if (cmp(v, least) == std::strong_ordering::less) least = v;
  Value floor = Rational(*f.trunc()) * least;
  if (known_floor && cmp(*known_floor, floor) == std::strong_ordering::greater) floor = *known_floor;
  if (!g.finite() || cmp(g.value, floor) != std::strong_ordering::less) {
    g.kind = GaussValue::Kind::AboveTruncation;
    g.value = Value();
    g.argmin.clear();
  }
  return g;
}

Substitution identity_substitution(std::size_t nvars) {
  Substitution s;
  for (std::size_t i = 0; i < nvars; ++i) s.push_back(Poly::variable(nvars, i));
  return s;
}

Poly substitute(const Poly& f, const Substitution& sub, std::optional<long> trunc) {
  if (sub.size() != f.nvars()) throw PreconditionError("substitution does not cover every variable");
  const std::size_t nn = sub.empty() ? 0 : sub.front().nvars();
  for (const auto& p : sub)
    if (p.nvars() != nn) throw PreconditionError("substitution images live in different rings");
  // powers[i][k] = sub[i]^k, filled lazily
  std::vector<std::vector<Poly>> powers(sub.size());
  auto pw = [&](std::size_t i, long k) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Poly::constant(nn, 1));
    while (static_cast<long>(cache.size()) <= k) cache.push_back(multiply(cache.back(), sub[i], trunc));
    return cache[k];
  };
  Poly out(nn);
  for (const auto& [k, c] : f.terms()) {
    Poly t = Poly::monomial(nn, Monomial(nn, 0), c, k.u);
    for (std::size_t i = 0; i < k.e.size() && !t.is_zero(); ++i)
      if (k.e[i] != 0) t = multiply(t, pw(i, k.e[i]), trunc);
    out = out + t;
  }
  return out;
}

Substitution compose(const Substitution& first, const Substitution& second, std::optional<long> trunc) {
  Substitution out;
  out.reserve(first.size());
  for (const auto& p : first) out.push_back(substitute(p, second, trunc));
  return out;
}

Poly expand_symbols(const Poly& f, const std::map<std::string, Poly>& defs,
                    const std::map<std::string, Poly>& inverses, std::optional<long> trunc) {
  Poly out(f.nvars());
  for (const auto& [k, c] : f.terms()) {
    SymExps kept;
    Poly t = Poly::constant(f.nvars(), c);
    for (const auto& [name, e] : k.u) {
      const auto& table = e > 0 ? defs : inverses;
      auto it = table.find(name);
      if (it == table.end()) {
        if (defs.count(name)) throw PreconditionError("no inverse available for unit symbol " + name);
        kept[name] = e;
        continue;
      }
      t = multiply(t, power(it->second, static_cast<unsigned>(e > 0 ? e : -e), trunc), trunc);
    }
    t = multiply(t, Poly::monomial(f.nvars(), k.e, 1, kept), trunc);
    out = out + t;
  }
  return out;
}

Poly derivation_apply(const Poly& f, const RatVector& e) {
  if (e.size() > f.nvars()) throw PreconditionError("derivation weight vector longer than nvars");
  Poly out(f.nvars());
  for (const auto& [k, c] : f.terms()) {
    Rational w = 0;
    for (std::size_t i = 0; i < e.size(); ++i) w += Rational(k.e[i]) * e[i];
    out.add_term(k.e, k.u, c * w);
  }
  return out;
}

}  // namespace lmono
