#ifndef LMONO_IO_HPP
#define LMONO_IO_HPP

#include <string>

#include "json.hpp"

#include "lmono/certify.hpp"
#include "lmono/cuts.hpp"
#include "lmono/problem.hpp"

namespace lmono {

using json = nlohmann::json;

inline constexpr const char* kProblemSchema = "mf-problem/1";
inline constexpr const char* kCertSchema = "mf-cert/1";

// All parse functions throw ParseError on malformed input.
json load_json_file(const std::string& path);
json parse_json_text(const std::string& text);

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);
json integer_to_json(const Integer& z);
Integer integer_from_json(const json& j);
json matrix_to_json(const IntMatrix& A);
IntMatrix matrix_from_json(const json& j);
json descriptors_to_json(const std::vector<GeneratorDescriptor>& b);
std::vector<GeneratorDescriptor> descriptors_from_json(const json& j);
json unit_to_json(const UnitExpr& u);
UnitExpr unit_from_json(const json& j);
json poly_to_json(const Poly& p);
Poly poly_from_json(const json& j, std::size_t nvars);
json step_to_json(const TransformStep& s);
TransformStep step_from_json(const json& j);
json value_to_json(const Value& v);

json problem_to_json(const ExtensionProblem& p);
ExtensionProblem problem_from_json(const json& j);
// FNV-1a 64 over the compact canonical dump of the problem.
std::string problem_hash(const ExtensionProblem& p);

json report_to_json(const Report& r);

json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

// Certificate for a solver run; the certifier's verdicts go into `checks`.
Certificate make_certificate(const ExtensionProblem& p, const SolveResult& r);

// Pretty, sorted keys, trailing newline.
std::string dump(const json& j);

}  // namespace lmono

#endif  // LMONO_IO_HPP
