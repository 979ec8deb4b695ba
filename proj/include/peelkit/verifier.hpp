#pragma once

#include "peelkit/construction.hpp"
#include "peelkit/interval.hpp"
#include "peelkit/peeling.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace peelkit {

// a = 9.78 and b = 8.67 as exact rationals
inline const Rational& const_a() {
  static const Rational a(489, 50);
  return a;
}
inline const Rational& const_b() {
  static const Rational b(867, 100);
  return b;
}

enum class Verdict { holds, fails, undecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "undecided-at-precision";
  }
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyValue {
  Rational p;
  Rational lo, hi;  // exact dyadic enclosure of H(p)
  long precision_bits = 0;
};

inline Interval entropy_interval(const Rational& p, long prec = default_precision_bits()) {
  if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
  if (p == 0 || p == 1) return Interval(prec);  // H(0) = H(1) = 0 exactly
  auto term = [&](const Rational& q) {  // q*log2(1/q), positive on (0,1)
    return Interval::log2_of(Rational(1) / q, prec).scaled(q);
  };
  Interval h = term(p).add(term(Rational(1) - p));
  h.clamp(Rational(0), Rational(1));
  return h;
}

inline EntropyValue entropy(const Rational& p, long precision_bits = default_precision_bits()) {
  Interval h = entropy_interval(p, precision_bits);
  EntropyValue v;
  v.p = p;
  v.lo = h.lo();
  v.hi = h.hi();
  v.precision_bits = precision_bits;
  return v;
}

// ---------------------------------------------------------------------------
// lemma checks

// C(n, alpha*n) <= 2^(n*H(alpha)), certified in log2 space. Escalates the
// working precision before giving up; equality cases (alpha = 0) stay exact.
inline bool check_entropy_bound(long n, const Rational& alpha,
                                long prec = default_precision_bits()) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (alpha < 0 || alpha > Rational(1, 2)) throw std::invalid_argument("alpha outside [0,1/2]");
  Rational an = alpha * n;
  if (an.get_den() != 1) throw std::invalid_argument("alpha*n not integral");
  unsigned long k = an.get_num().get_ui();
  BigInt binom = binomial(static_cast<unsigned long>(n), k);
  for (long p = prec; p <= prec * 16; p *= 4) {
    Interval lhs = Interval::log2_of(Rational(binom), p);
    Interval rhs = entropy_interval(alpha, p).scaled(Rational(n));
    if (lhs.certainly_le(rhs)) return true;
    if (lhs.certainly_gt(rhs)) return false;
  }
  throw std::runtime_error("undecided at precision");
}

// C(n, ceil(k)) <= l * C(n, floor(k)); pure integer arithmetic.
inline bool check_ratio_lemma(long n, const Rational& k, long l) {
  if (n < 1 || l < 1) throw std::invalid_argument("n and l must be positive");
  if (k * (l + 1) < Rational(n) || k > Rational(n))
    throw std::invalid_argument("k out of range");
  BigInt up = ceil_of(k), down = floor_of(k);
  return binomial(static_cast<unsigned long>(n), up.get_ui()) <=
         l * binomial(static_cast<unsigned long>(n), down.get_ui());
}

struct SeventhBoundRow {
  long n = 0;
  bool half = false;                 // 2*C(n, n/2) <= 2^n, all n >= 1
  std::optional<bool> seventh;      // 7*C(n, n/2) <= 2^n, asserted for n >= 36 only
};

inline SeventhBoundRow check_seventh_bound_detail(long n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  SeventhBoundRow row;
  row.n = n;
  BigInt central = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(n / 2));
  BigInt pow2 = int_pow(BigInt(2), static_cast<unsigned long>(n));
  row.half = 2 * central <= pow2;
  if (n >= 36) row.seventh = 7 * central <= pow2;
  return row;
}

inline bool check_seventh_bound(long n) {
  auto row = check_seventh_bound_detail(n);
  return row.half && row.seventh.value_or(true);
}

// ---------------------------------------------------------------------------
// base cases: 3^floor(n/3) * ceil(2n/3)! <= a^n/500 and the B analogue with
// 3^floor(n/9) against b^n/500, cross-multiplied so only integers appear

struct BaseCaseRow {
  int n = 0;
  char family = 'S';
  BigInt lhs;      // 3^... * ceil(2n/3)!
  Rational rhs;    // a^n/500 resp. b^n/500
  bool holds = false;
};

inline std::vector<BaseCaseRow> base_case_check() {
  std::vector<BaseCaseRow> rows;
  const BigInt p489 = 489, p867 = 867, p50 = 50, p100 = 100;
  for (int n = 6; n <= 53; ++n) {
    const auto un = static_cast<unsigned long>(n);
    BigInt fact = factorial(static_cast<unsigned long>((2 * n + 2) / 3));  // ceil(2n/3)!
    {
      BaseCaseRow r;
      r.n = n;
      r.family = 'S';
      r.lhs = int_pow(BigInt(3), un / 3) * fact;
      r.rhs = Rational(int_pow(p489, un), 500 * int_pow(p50, un));
      r.rhs.canonicalize();
      r.holds = 500 * int_pow(p50, un) * r.lhs <= int_pow(p489, un);
      rows.push_back(std::move(r));
    }
    {
      BaseCaseRow r;
      r.n = n;
      r.family = 'B';
      r.lhs = int_pow(BigInt(3), un / 9) * fact;
      r.rhs = Rational(int_pow(p867, un), 500 * int_pow(p100, un));
      r.rhs.canonicalize();
      r.holds = 500 * int_pow(p100, un) * r.lhs <= int_pow(p867, un);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// case-analysis certificate

struct CaseCondition {
  char family = 'S';
  int case_index = 0;
  std::string kind;     // exponent-check | final-inequality | coefficient-bound | coefficient-sum
  std::string display;  // the inequality as printed
  Verdict verdict = Verdict::undecided;
  Rational value_lo, value_hi;   // certified enclosure of the bounded expression
  Rational bound;                // what it must stay below (or equal)
  Rational margin_lo, margin_hi; // bound - value
  std::string note;
};

struct CertificateReport {
  long precision_bits = 0;
  std::vector<CaseCondition> lemma_checks;       // summaries when bundled into a full report
  std::vector<BaseCaseRow> base_case_checks;
  std::vector<CaseCondition> case_conditions;    // 13 final inequalities
  std::vector<CaseCondition> coefficient_values; // 13 coefficient bounds
  std::vector<CaseCondition> sums;               // the two coefficient sums
  bool overall = false;
};

namespace detail {

inline void settle(CaseCondition& c, const Interval& value, const Rational& bound) {
  c.value_lo = value.lo();
  c.value_hi = value.hi();
  c.bound = bound;
  Interval margin = Interval::from_rational(bound, value.precision()).sub(value);
  c.margin_lo = margin.lo();
  c.margin_hi = margin.hi();
  if (value.certainly_le(bound))
    c.verdict = Verdict::holds;
  else if (value.certainly_gt(bound))
    c.verdict = Verdict::fails;
  else
    c.verdict = Verdict::undecided;
}

// for conditions whose two sides are exact rationals (no irrational entropy
// terms left), e.g. the 2/3 + 2/3 = 4/3 equality case
inline void settle_exact(CaseCondition& c, const Rational& value, const Rational& bound) {
  c.value_lo = c.value_hi = value;
  c.bound = bound;
  c.margin_lo = c.margin_hi = bound - value;
  c.verdict = value <= bound ? Verdict::holds : Verdict::fails;
}

struct HTerm {
  Rational coef;
  Rational p;
};

struct ExponentSpec {
  char family;
  int case_index;
  std::vector<HTerm> terms;
  Rational constant;
  Rational bound;
  const char* display;
};

inline const std::vector<ExponentSpec>& exponent_specs() {
  static const std::vector<ExponentSpec> specs = {
      {'B', 1, {{{7, 27}, {3, 7}}}, {2, 3}, {9221, 10000}, "7*H(3/7)/27 + 2/3 <= 0.9221"},
      {'B', 2, {{{8, 27}, {3, 8}}}, {2, 3}, {9495, 10000}, "8*H(3/8)/27 + 2/3 <= 0.9495"},
      {'B', 3, {{{12, 27}, {1, 4}}}, {2, 3}, {10273, 10000}, "12*H(1/4)/27 + 2/3 <= 1.0273"},
      {'B', 4, {{{15, 27}, {1, 5}}}, {2, 3}, {10678, 10000}, "15*H(1/5)/27 + 2/3 <= 1.0678"},
      {'B', 5, {{{21, 27}, {1, 7}}}, {2, 3}, {1127, 1000}, "21*H(1/7)/27 + 2/3 <= 1.127"},
      {'B', 6, {{{21, 27}, {3, 7}}}, {4, 9}, {12108, 10000}, "21*H(3/7)/27 + 4/9 <= 1.2108"},
      {'S', 1, {{{13, 27}, {4, 13}}}, {2, 3}, {10955, 10000}, "13*H(4/13)/27 + 2/3 <= 1.0955"},
      {'S', 2, {{{14, 27}, {5, 14}}}, {2, 3}, {11543, 10000}, "14*H(5/14)/27 + 2/3 <= 1.1543"},
      {'S', 3, {{{15, 27}, {2, 5}}}, {2, 3}, {12061, 10000}, "15*H(2/5)/27 + 2/3 <= 1.2061"},
      {'S', 4, {{{17, 27}, {8, 17}}}, {2, 3}, {12948, 10000}, "17*H(8/17)/27 + 2/3 <= 1.2948"},
      {'S', 5, {{{18, 27}, {1, 2}}}, {2, 3}, {4, 3}, "18*H(1/2)/27 + 2/3 = 2/3 + 2/3 <= 4/3"},
      {'S', 6, {{{22, 27}, {9, 22}}}, {2, 3}, {14620, 10000}, "22*H(9/22)/27 + 2/3 <= 1.4620"},
      {'S', 7, {{{1, 1}, {1, 3}}}, {2, 3}, {15850, 10000}, "H(1/3) + 2/3 <= 1.5850"},
  };
  return specs;
}

struct PowTerm {  // 2^e2 * a^ea * b^eb
  Rational e2, ea, eb;
};

struct CaseSpec {
  char family;  // 'B' rows bound b from below, 'S' rows bound a
  int case_index;
  std::vector<PowTerm> terms;
  const char* display;
  const char* note;
};

inline const std::vector<CaseSpec>& case_specs() {
  static const std::vector<CaseSpec> specs = {
      {'B', 1, {{{9221, 10000}, {2, 3}, {0}}}, "b >= a^(2/3)*2^0.9221", ""},
      {'B', 2, {{{14243, 10000}, {1, 2}, {0}}}, "b >= a^(1/2)*2^1.4243", ""},
      {'B', 3, {{{30819, 10000}, {0}, {0}}, {{12496, 10000}, {5, 9}, {0}}},
       "b >= max(2^3.0819, a^(5/9)*2^1.2496)", ""},
      {'B', 4, {{{15123, 10000}, {4, 9}, {0}}}, "b >= a^(4/9)*2^1.5123", ""},
      {'B', 5, {{{13493, 10000}, {1, 3}, {0}}}, "b >= a^(1/3)*2^1.3493", ""},
      {'B', 6, {{{12108, 10000}, {4, 9}, {0}}}, "b >= a^(4/9)*2^1.2108", ""},
      {'S', 1, {{{32865, 10000}, {0}, {0}}}, "a >= 2^3.2865", ""},
      {'S', 2, {{{17315, 10000}, {0}, {1, 2}}}, "a >= 2^1.7315*b^(1/2)", ""},
      {'S', 3, {{{32138, 10000}, {0}, {0}}, {{12061, 10000}, {0}, {2, 3}}},
       "a >= max(2^3.2138, 2^1.2061*b^(2/3))", ""},
      {'S', 4, {{{32277, 10000}, {0}, {0}}, {{19506, 10000}, {0}, {3, 7}}},
       "a >= max(2^3.2277, 2^1.9506*b^(3/7))", ""},
      {'S', 5, {{{40, 23}, {0}, {9, 23}}, {{12, 5}, {0}, {0}}, {{16, 5}, {0}, {0}}},
       "a >= max(2^(40/23)*b^(9/23), 2^(12/5), 2^(16/5))",
       "exponents taken as given; not re-derived from the case bound"},
      {'S', 6, {{{226317, 100000}, {0}, {0}}, {{328, 100}, {0}, {0}}},
       "a >= max(2^2.26317, 2^3.28)",
       "five-decimal constant taken as given"},
      {'S', 7, {{{27109, 10000}, {0}, {0}}}, "a >= 2^2.7109", ""},
  };
  return specs;
}

struct CoefTerm {  // mult * a^ea * b^eb / den
  long mult;
  Rational ea, eb;
  BigInt den;
};

struct CoefSpec {
  char family;
  int index;
  std::vector<CoefTerm> terms;
  Rational printed;
  const char* display;
};

inline const std::vector<CoefSpec>& coef_specs() {
  static const std::vector<CoefSpec> specs = {
      {'B', 1, {{8, {2, 3}, {0}, BigInt(1750000)}}, {3, 100000},
       "C1 = 8*a^(2/3)/1750000 <= 0.00003"},
      {'B', 2, {{8, {2, 3}, {2, 3}, BigInt(1750000)}}, {9, 100000},
       "C2 = 8*a^(2/3)*b^(2/3)/1750000 <= 0.00009"},
      {'B', 3,
       {{12, {0}, {4, 3}, BigInt(1750000)}, {24, {22, 9}, {0}, BigInt(875000000)}},
       {13, 100000},
       "C3 = max(12*b^(4/3)/1750000, 24*a^(22/9)/875000000) <= 0.00013"},
      {'B', 4, {{64, {32, 9}, {0}, BigInt("437500000000")}}, {1, 100000},
       "C4 = 64*a^(32/9)/437500000000 <= 0.00001"},
      {'B', 5, {{48, {24, 9}, {0}, BigInt(875000000)}}, {3, 100000},
       "C5 = 48*a^(24/9)/875000000 <= 0.00003"},
      {'B', 6, {{24, {14, 9}, {0}, BigInt(1750000)}}, {48, 100000},
       "C6 = 24*a^(14/9)/1750000 <= 0.00048"},
      {'S', 1, {{24, {4, 3}, {0}, BigInt(1750000)}}, {29, 100000},
       "C1 = 24*a^(4/3)/1750000 <= 0.00029"},
      {'S', 2, {{24, {2, 3}, {2, 3}, BigInt(1750000)}}, {27, 100000},
       "C2 = 24*a^(2/3)*b^(2/3)/1750000 <= 0.00027"},
      {'S', 3,
       {{48, {22, 9}, {0}, BigInt(875000000)}, {24, {0}, {4, 3}, BigInt(1750000)}},
       {25, 100000},
       "C3 = max(48*a^(22/9)/875000000, 24*b^(4/3)/1750000) <= 0.00025"},
      {'S', 4,
       {{192, {98, 27}, {0}, BigInt("437500000000")},
        {48, {16, 9}, {2, 3}, BigInt(875000000)}},
       {2, 100000},
       "C4 = max(192*a^(98/27)/437500000000, 48*a^(16/9)*b^(2/3)/875000000) <= 0.00002"},
      {'S', 5,
       {{24, {50, 27}, {2, 3}, BigInt("6125000000")},
        {12, {14, 9}, {0}, BigInt(12250000)},
        {48, {32, 9}, {0}, BigInt("3062500000000")}},
       {4, 100000},
       "C5 = max(24*a^(50/27)*b^(2/3)/6125000000, 12*a^(14/9)/12250000, "
       "48*a^(32/9)/3062500000000) <= 0.00004"},
      {'S', 6,
       {{24, {14, 9}, {0}, BigInt(1750000)},
        {384, {98, 27}, {0}, BigInt("437500000000")}},
       {48, 100000},
       "C6 = max(24*a^(14/9)/1750000, 384*a^(98/27)/437500000000) <= 0.00048"},
      {'S', 7, {{48, {24, 9}, {0}, BigInt(875000000)}}, {3, 100000},
       "C7 = 48*a^(24/9)/875000000 <= 0.00003"},
  };
  return specs;
}

// a^ea * b^eb * 2^e2 as an interval
inline Interval pow_term(const PowTerm& t, long prec) {
  Interval r = Interval::exp2_of(Interval::from_rational(t.e2, prec));
  if (t.ea != 0) r = r.mul(Interval::pow(const_a(), t.ea, prec));
  if (t.eb != 0) r = r.mul(Interval::pow(const_b(), t.eb, prec));
  return r;
}

inline Interval coef_term(const CoefTerm& t, long prec) {
  Interval r = Interval::from_rational(Rational(t.mult), prec);
  if (t.ea != 0) r = r.mul(Interval::pow(const_a(), t.ea, prec));
  if (t.eb != 0) r = r.mul(Interval::pow(const_b(), t.eb, prec));
  return r.scaled(Rational(1, t.den));
}

}  // namespace detail

inline std::vector<CaseCondition> check_exponent_constants(
    long precision_bits = default_precision_bits()) {
  std::vector<CaseCondition> out;
  for (const auto& spec : detail::exponent_specs()) {
    CaseCondition c;
    c.family = spec.family;
    c.case_index = spec.case_index;
    c.kind = "exponent-check";
    c.display = spec.display;
    // H(0) = H(1) = 0 and H(1/2) = 1 exactly; keep those contributions
    // rational so equality cases certify instead of straddling
    Rational exact_part = spec.constant;
    Interval rest(precision_bits);
    bool any_interval = false;
    for (const auto& t : spec.terms) {
      if (t.p == 0 || t.p == 1) continue;
      if (t.p == Rational(1, 2)) {
        exact_part += t.coef;
        continue;
      }
      rest = rest.add(entropy_interval(t.p, precision_bits).scaled(t.coef));
      any_interval = true;
    }
    if (any_interval)
      detail::settle(c, rest.add(Interval::from_rational(exact_part, precision_bits)),
                     spec.bound);
    else
      detail::settle_exact(c, exact_part, spec.bound);
    out.push_back(std::move(c));
  }
  return out;
}

inline CertificateReport check_case_conditions(long precision_bits = default_precision_bits()) {
  CertificateReport rep;
  rep.precision_bits = precision_bits;
  bool all = true;

  for (const auto& spec : detail::case_specs()) {
    CaseCondition c;
    c.family = spec.family;
    c.case_index = spec.case_index;
    c.kind = "final-inequality";
    c.display = spec.display;
    c.note = spec.note;
    Interval v = detail::pow_term(spec.terms[0], precision_bits);
    for (std::size_t i = 1; i < spec.terms.size(); ++i)
      v = v.max_with(detail::pow_term(spec.terms[i], precision_bits));
    const Rational& lhs = spec.family == 'B' ? const_b() : const_a();
    detail::settle(c, v, lhs);
    all = all && c.verdict == Verdict::holds;
    rep.case_conditions.push_back(std::move(c));
  }

  Interval sum_b(precision_bits), sum_s(precision_bits);
  for (const auto& spec : detail::coef_specs()) {
    CaseCondition c;
    c.family = spec.family;
    c.case_index = spec.index;
    c.kind = "coefficient-bound";
    c.display = spec.display;
    Interval v = detail::coef_term(spec.terms[0], precision_bits);
    for (std::size_t i = 1; i < spec.terms.size(); ++i)
      v = v.max_with(detail::coef_term(spec.terms[i], precision_bits));
    detail::settle(c, v, spec.printed);
    all = all && c.verdict == Verdict::holds;
    if (spec.family == 'B')
      sum_b = sum_b.add(v);
    else
      sum_s = sum_s.add(v);
    rep.coefficient_values.push_back(std::move(c));
  }

  {
    CaseCondition c;
    c.family = 'B';
    c.kind = "coefficient-sum";
    c.display = "sum(C1..C6) <= 0.00077";
    c.note = "0.00077 <= 1/500, so the recursion absorbs the error terms";
    detail::settle(c, sum_b, Rational(77, 100000));
    all = all && c.verdict == Verdict::holds;
    rep.sums.push_back(std::move(c));
  }
  {
    CaseCondition c;
    c.family = 'S';
    c.kind = "coefficient-sum";
    c.display = "sum(C1..C7) <= 0.00138";
    c.note = "0.00138 < 0.002 = 1/500";
    detail::settle(c, sum_s, Rational(138, 100000));
    all = all && c.verdict == Verdict::holds;
    rep.sums.push_back(std::move(c));
  }

  rep.overall = all;
  return rep;
}

// ---------------------------------------------------------------------------
// small-n theorem check: exact counts of the constructed sets against the
// exact bounds a^n/500 and b^n/500

struct TheoremRow {
  int n = 0;
  BigInt g_s;
  std::optional<BigInt> g_b;  // defined for n >= 9 only
  Rational s_bound;
  Rational b_bound;
  bool holds = false;
};

inline std::vector<TheoremRow> empirical_theorem_check(int n_max,
                                                       const ConstructionParams& prm = {},
                                                       const PeelOptions& opt = {}) {
  if (n_max < 6) throw std::invalid_argument("n_max below 6");
  if (n_max > std::min(opt.max_exact_n, kMaxPeelPoints))
    throw std::invalid_argument("n_max beyond exact-count limit");
  std::vector<TheoremRow> rows;
  for (int n = 6; n <= n_max; ++n) {
    const auto un = static_cast<unsigned long>(n);
    TheoremRow r;
    r.n = n;
    r.g_s = count_peelings(build_s(n, prm).set, opt);
    r.s_bound = Rational(int_pow(BigInt(489), un), 500 * int_pow(BigInt(50), un));
    r.s_bound.canonicalize();
    r.b_bound = Rational(int_pow(BigInt(867), un), 500 * int_pow(BigInt(100), un));
    r.b_bound.canonicalize();
    // cross-multiplied: g * 500 * 50^n <= 489^n
    r.holds = r.g_s * 500 * int_pow(BigInt(50), un) <= int_pow(BigInt(489), un);
    if (n >= 9) {
      r.g_b = count_peelings(build_b(n, 1, prm).set, opt);
      r.holds = r.holds &&
                *r.g_b * 500 * int_pow(BigInt(100), un) <= int_pow(BigInt(867), un);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace peelkit
