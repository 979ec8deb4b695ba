#pragma once

#include "peelkit/construction.hpp"
#include "peelkit/interval.hpp"
#include "peelkit/peeling.hpp"
#include "peelkit/verifier.hpp"

#include <json.hpp>
#include <mpfr.h>

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace peelkit {

// Deterministic decimal rendering of an exact rational (round-to-nearest at
// 256 bits, then fixed scientific mantissa width).
inline std::string decimal_string(const Rational& q, int digits = 12) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.*Re", digits, x);
  mpfr_clear(x);
  return std::string(buf);
}

inline nlohmann::json interval_to_json(const Rational& lo, const Rational& hi, int digits = 12) {
  nlohmann::json j;
  j["lo"] = decimal_string(lo, digits);
  j["hi"] = decimal_string(hi, digits);
  return j;
}

inline nlohmann::json estimate_to_json(const Estimate& e) {
  nlohmann::json j;
  std::ostringstream m, s;
  m << std::setprecision(15) << e.mean;
  s << std::setprecision(15) << e.std_error;
  j["mean"] = m.str();
  j["std_error"] = s.str();
  return j;
}

inline nlohmann::json structure_report_to_json(const StructureReport& r) {
  nlohmann::json j;
  j["general_position"] = r.general_position;
  j["hull_is_ray_tips"] = r.hull_is_ray_tips;
  j["x_order_ok"] = r.x_order_ok;
  j["triangle_persistence_ok"] = r.triangle_persistence_ok;
  j["all_ok"] = r.all_ok();
  j["failures"] = r.failures;
  return j;
}

inline nlohmann::json entropy_value_to_json(const EntropyValue& v) {
  nlohmann::json j;
  j["p"] = to_fraction_string(v.p);
  j["value"] = interval_to_json(v.lo, v.hi, 20);
  j["precision_bits"] = v.precision_bits;
  return j;
}

inline nlohmann::json seventh_row_to_json(const SeventhBoundRow& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["half_holds"] = r.half;
  if (r.seventh.has_value())
    j["seventh_holds"] = *r.seventh;
  else
    j["seventh_holds"] = nullptr;
  return j;
}

inline nlohmann::json base_case_row_to_json(const BaseCaseRow& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["family"] = std::string(1, r.family);
  j["lhs"] = r.lhs.get_str();
  j["rhs"] = to_fraction_string(r.rhs);
  j["rhs_decimal"] = decimal_string(r.rhs, 6);
  j["holds"] = r.holds;
  return j;
}

inline nlohmann::json case_condition_to_json(const CaseCondition& c) {
  nlohmann::json j;
  j["family"] = std::string(1, c.family);
  j["case_index"] = c.case_index;
  j["kind"] = c.kind;
  j["display"] = c.display;
  j["verdict"] = to_string(c.verdict);
  j["value"] = interval_to_json(c.value_lo, c.value_hi);
  j["bound"] = to_fraction_string(c.bound);
  j["bound_decimal"] = decimal_string(c.bound, 6);
  j["margin"] = interval_to_json(c.margin_lo, c.margin_hi);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json certificate_to_json(const CertificateReport& r) {
  nlohmann::json j;
  j["precision_bits"] = r.precision_bits;
  if (!r.lemma_checks.empty()) {
    auto lems = nlohmann::json::array();
    for (const auto& c : r.lemma_checks) lems.push_back(case_condition_to_json(c));
    j["lemma_checks"] = std::move(lems);
  }
  if (!r.base_case_checks.empty()) {
    auto bcs = nlohmann::json::array();
    for (const auto& c : r.base_case_checks) bcs.push_back(base_case_row_to_json(c));
    j["base_case_checks"] = std::move(bcs);
  }
  auto conds = nlohmann::json::array();
  for (const auto& c : r.case_conditions) conds.push_back(case_condition_to_json(c));
  j["case_conditions"] = std::move(conds);
  auto coefs = nlohmann::json::array();
  for (const auto& c : r.coefficient_values) coefs.push_back(case_condition_to_json(c));
  j["coefficient_values"] = std::move(coefs);
  auto sums = nlohmann::json::array();
  for (const auto& c : r.sums) sums.push_back(case_condition_to_json(c));
  j["sums"] = std::move(sums);
  j["overall"] = r.overall;
  return j;
}

inline nlohmann::json theorem_row_to_json(const TheoremRow& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["g_s"] = r.g_s.get_str();
  if (r.g_b.has_value())
    j["g_b"] = r.g_b->get_str();
  else
    j["g_b"] = nullptr;
  j["s_bound_decimal"] = decimal_string(r.s_bound, 6);
  j["b_bound_decimal"] = decimal_string(r.b_bound, 6);
  j["holds"] = r.holds;
  return j;
}

inline nlohmann::json theorem_table_to_json(const std::vector<TheoremRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) j.push_back(theorem_row_to_json(r));
  return j;
}

namespace detail {

inline std::string pad(const std::string& s, std::size_t w) {
  return s.size() + 2 > w ? s + "  " : s + std::string(w - s.size(), ' ');
}

}  // namespace detail

inline std::string render_case_condition_table(const std::vector<CaseCondition>& conds) {
  std::ostringstream out;
  out << detail::pad("case", 6) << detail::pad("kind", 20) << detail::pad("verdict", 24)
      << detail::pad("value<=", 22) << detail::pad("bound", 14) << "margin>=\n";
  for (const auto& c : conds) {
    std::string name = std::string(1, c.family) + std::to_string(c.case_index);
    if (c.case_index == 0) name = std::string(1, c.family) + "-sum";
    out << detail::pad(name, 6) << detail::pad(c.kind, 20) << detail::pad(to_string(c.verdict), 24)
        << detail::pad(decimal_string(c.value_hi, 10), 22)
        << detail::pad(decimal_string(c.bound, 6), 14) << decimal_string(c.margin_lo, 6) << "\n";
  }
  return out.str();
}

inline std::string render_certificate(const CertificateReport& r) {
  std::ostringstream out;
  out << "certificate at " << r.precision_bits << " bits\n\n";
  out << "final inequalities (13):\n" << render_case_condition_table(r.case_conditions) << "\n";
  out << "coefficient bounds (13):\n" << render_case_condition_table(r.coefficient_values) << "\n";
  out << "coefficient sums (2):\n" << render_case_condition_table(r.sums) << "\n";
  out << "overall: " << (r.overall ? "all hold" : "NOT all hold") << "\n";
  return out.str();
}

inline std::string render_base_case_table(const std::vector<BaseCaseRow>& rows) {
  std::ostringstream out;
  out << detail::pad("n", 4) << detail::pad("family", 8) << detail::pad("lhs", 54)
      << detail::pad("rhs~", 20) << "holds\n";
  for (const auto& r : rows) {
    out << detail::pad(std::to_string(r.n), 4) << detail::pad(std::string(1, r.family), 8)
        << detail::pad(r.lhs.get_str(), 54) << detail::pad(decimal_string(r.rhs, 6), 20)
        << (r.holds ? "yes" : "NO") << "\n";
  }
  return out.str();
}

inline std::string render_theorem_table(const std::vector<TheoremRow>& rows) {
  std::ostringstream out;
  out << detail::pad("n", 4) << detail::pad("g(S_n)", 16) << detail::pad("g(B_n)", 16)
      << detail::pad("a^n/500~", 18) << detail::pad("b^n/500~", 18) << "holds\n";
  for (const auto& r : rows) {
    out << detail::pad(std::to_string(r.n), 4) << detail::pad(r.g_s.get_str(), 16)
        << detail::pad(r.g_b ? r.g_b->get_str() : "-", 16)
        << detail::pad(decimal_string(r.s_bound, 6), 18)
        << detail::pad(decimal_string(r.b_bound, 6), 18) << (r.holds ? "yes" : "NO") << "\n";
  }
  return out.str();
}

}  // namespace peelkit
