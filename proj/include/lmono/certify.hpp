#ifndef LMONO_CERTIFY_HPP
#define LMONO_CERTIFY_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lmono/problem.hpp"
#include "lmono/transform.hpp"
#include "lmono/valuegroup.hpp"

namespace lmono {

struct Certificate {
  ExtensionProblem problem;
  std::string problem_hash;
  bool solved = false;
  std::string failure;
  TransformSeq t_steps;
  TransformSeq u_steps;
  MonomialForm final_form;
  std::map<std::string, bool> checks;
  std::map<std::string, std::string> metadata;
};

struct CheckItem {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct Report {
  std::vector<CheckItem> items;

  void add(std::string name, bool ok, std::string detail = {});
  void merge(const Report& other, const std::string& prefix = {});
  bool ok() const;
  // First failing item, or nullptr.
  const CheckItem* first_failure() const;
  std::string to_text() const;
};

// Per-step legality; `after` receives the post-values when they exist.
Report check_step(const TransformStep& s, std::span<const Value> before, std::vector<Value>* after = nullptr);

// Items a.* (substitution identity, units), b.* (rank m, C >= 0), c.* (values)
// and d.* (tail identifications).
Report check_final_form(const Certificate& cert);

Report check_rank_bookkeeping(const ExtensionProblem& problem, const Certificate& cert);

// Everything above plus the solver status and, when given, the problem hash.
Report check_certificate(const Certificate& cert, const std::string& computed_hash = {});

}  // namespace lmono

#endif  // LMONO_CERTIFY_HPP
