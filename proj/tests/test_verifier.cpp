#include "peelkit/verifier.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace peelkit;

namespace {

Rational pow2_neg(unsigned long k) { return Rational(1) / rational_pow(Rational(2), k); }

const CaseCondition* find_case(const std::vector<CaseCondition>& v, char family, int index) {
  for (const auto& c : v)
    if (c.family == family && c.case_index == index) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("interval arithmetic encloses exact answers", "[interval]") {
  auto third = Interval::from_rational(Rational(1, 3));
  CHECK(third.lo() < Rational(1, 3));
  CHECK(third.hi() > Rational(1, 3));
  CHECK(third.hi() - third.lo() <= pow2_neg(120));

  auto dyadic = Interval::from_rational(Rational(5, 8));
  CHECK(dyadic.lo() == Rational(5, 8));
  CHECK(dyadic.hi() == Rational(5, 8));

  auto l8 = Interval::log2_of(Rational(8));
  CHECK(l8.lo() <= 3);
  CHECK(l8.hi() >= 3);
  CHECK(l8.hi() - l8.lo() <= pow2_neg(120));
  CHECK_THROWS_AS(Interval::log2_of(Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(Interval::log2_of(Rational(-2)), std::invalid_argument);

  auto e = Interval::exp2_of(Interval::from_rational(Rational(5, 2)));
  // 2^(5/2) = sqrt(32): compare by squaring the exact rational endpoints
  CHECK(e.lo() * e.lo() <= 32);
  CHECK(e.hi() * e.hi() >= 32);

  auto prod = Interval::from_rational(Rational(-2)).mul(Interval::from_rational(Rational(-5)));
  CHECK(prod.lo() <= 10);
  CHECK(prod.hi() >= 10);

  auto sq3 = Interval::pow(Rational(3), Rational(1, 2));
  CHECK(sq3.lo() * sq3.lo() <= 3);
  CHECK(sq3.hi() * sq3.hi() >= 3);
  CHECK(sq3.hi() - sq3.lo() <= pow2_neg(100));

  auto sum = third.add(Interval::from_rational(Rational(2, 3)));
  CHECK(sum.lo() <= 1);
  CHECK(sum.hi() >= 1);
  CHECK(sum.certainly_le(Rational(10)));
  CHECK_FALSE(sum.certainly_gt(Rational(10)));
}

TEST_CASE("higher precision nests inside lower precision", "[interval]") {
  auto wide = Interval::log2_of(Rational(7), 64);
  auto tight = Interval::log2_of(Rational(7), 512);
  CHECK(wide.lo() <= tight.lo());
  CHECK(tight.hi() <= wide.hi());
  CHECK(tight.hi() - tight.lo() < wide.hi() - wide.lo());
}

TEST_CASE("entropy endpoints and exact values", "[verifier]") {
  auto half = entropy(Rational(1, 2));
  CHECK(half.lo == 1);
  CHECK(half.hi == 1);
  auto zero = entropy(Rational(0));
  CHECK(zero.lo == 0);
  CHECK(zero.hi == 0);
  auto one = entropy(Rational(1));
  CHECK(one.lo == 0);
  CHECK(one.hi == 0);
  CHECK_THROWS_AS(entropy(Rational(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(entropy(Rational(-1, 7)), std::invalid_argument);
}

TEST_CASE("entropy of 3/7 is tightly enclosed", "[verifier]") {
  auto v = entropy(Rational(3, 7));
  CHECK(v.hi - v.lo <= pow2_neg(100));
  CHECK(v.lo > Rational(98522, 100000));  // H(3/7) = 0.985228...
  CHECK(v.hi < Rational(98523, 100000));
  // independent higher-precision run must nest inside
  auto fine = entropy(Rational(3, 7), 512);
  CHECK(v.lo <= fine.lo);
  CHECK(fine.hi <= v.hi);
}

TEST_CASE("entropy is symmetric and peaks at 1/2", "[verifier]") {
  for (long q = 3; q <= 9; ++q) {
    auto a = entropy(Rational(1, q));
    auto b = entropy(Rational(q - 1, q));
    // the two enclosures must overlap, since the exact values coincide
    CHECK(a.lo <= b.hi);
    CHECK(b.lo <= a.hi);
    CHECK(a.hi <= 1);
    CHECK(a.lo >= 0);
  }
}

TEST_CASE("entropy bound on binomials", "[verifier]") {
  CHECK(check_entropy_bound(4, Rational(1, 2)));  // 6 <= 16
  CHECK(check_entropy_bound(7, Rational(0)));     // 1 <= 1, exact equality
  for (long n = 1; n <= 20; ++n)
    for (long k = 0; 2 * k <= n; ++k) CHECK(check_entropy_bound(n, Rational(k, n)));
  CHECK_THROWS_AS(check_entropy_bound(10, Rational(3, 5)), std::invalid_argument);
  CHECK_THROWS_AS(check_entropy_bound(10, Rational(1, 3)), std::invalid_argument);  // 10/3 not integral
  CHECK_THROWS_AS(check_entropy_bound(0, Rational(0)), std::invalid_argument);
}

TEST_CASE("ratio lemma on binomial neighbours", "[verifier]") {
  // C(10,4) = 210 <= 2 * C(10,3) = 240
  CHECK(check_ratio_lemma(10, Rational(10, 3), 2));
  CHECK(binomial(10, 4) == 210);
  CHECK(2 * binomial(10, 3) == 240);
  CHECK(check_ratio_lemma(12, Rational(7), 1));  // integral k: both sides equal
  CHECK_THROWS_AS(check_ratio_lemma(10, Rational(1, 2), 2), std::invalid_argument);  // k too small
  CHECK_THROWS_AS(check_ratio_lemma(10, Rational(11), 2), std::invalid_argument);    // k > n
}

TEST_CASE("seventh bound kicks in at 36", "[verifier]") {
  auto r36 = check_seventh_bound_detail(36);
  REQUIRE(r36.seventh.has_value());
  CHECK(*r36.seventh);
  CHECK(7 * binomial(36, 18) == BigInt("63525947100"));
  CHECK(int_pow(BigInt(2), 36) == BigInt("68719476736"));

  auto r35 = check_seventh_bound_detail(35);
  CHECK(r35.half);
  CHECK_FALSE(r35.seventh.has_value());  // only the halving clause below 36

  for (long n = 1; n <= 64; ++n) CHECK(check_seventh_bound(n));
}

TEST_CASE("all 96 base cases hold", "[verifier]") {
  auto rows = base_case_check();
  REQUIRE(rows.size() == 96);
  for (const auto& r : rows) {
    CHECK(r.holds);
    CHECK((r.family == 'S' || r.family == 'B'));
    CHECK((r.n >= 6 && r.n <= 53));
  }
  // spot-check the smallest S row: 3^2 * 4! = 216 against a^6/500
  CHECK(rows[0].n == 6);
  CHECK(rows[0].family == 'S');
  CHECK(rows[0].lhs == 216);
  CHECK(rows[0].rhs == rational_pow(const_a(), 6) / 500);
  // and the B companion: 3^0 * 4! = 24
  CHECK(rows[1].family == 'B');
  CHECK(rows[1].lhs == 24);
}

TEST_CASE("the 13 exponent constants certify", "[verifier]") {
  auto rows = check_exponent_constants();
  REQUIRE(rows.size() == 13);
  for (const auto& c : rows) {
    CHECK(c.verdict == Verdict::holds);
    CHECK(c.kind == "exponent-check");
    CHECK(c.margin_lo >= 0);
  }
  // the S case with H(1/2) is an exact equality, margin exactly zero
  const auto* s5 = find_case(rows, 'S', 5);
  REQUIRE(s5 != nullptr);
  CHECK(s5->margin_lo == 0);
  CHECK(s5->bound == Rational(4, 3));
  // a strict case keeps a strictly positive certified margin
  const auto* b1 = find_case(rows, 'B', 1);
  REQUIRE(b1 != nullptr);
  CHECK(b1->margin_lo > 0);
}

TEST_CASE("the certified case analysis holds end to end", "[verifier]") {
  auto rep = check_case_conditions();
  CHECK(rep.precision_bits == default_precision_bits());
  REQUIRE(rep.case_conditions.size() == 13);
  REQUIRE(rep.coefficient_values.size() == 13);
  REQUIRE(rep.sums.size() == 2);
  CHECK(rep.overall);
  for (const auto& c : rep.case_conditions) CHECK(c.verdict == Verdict::holds);
  for (const auto& c : rep.coefficient_values) CHECK(c.verdict == Verdict::holds);
  for (const auto& c : rep.sums) CHECK(c.verdict == Verdict::holds);

  // the first B case lands between 8.6 and the 8.67 budget
  const auto* b1 = find_case(rep.case_conditions, 'B', 1);
  REQUIRE(b1 != nullptr);
  CHECK(b1->value_lo > Rational(86, 10));
  CHECK(b1->value_hi < Rational(867, 100));
  CHECK(b1->bound == const_b());

  // S-family final inequalities are bounded by a, B-family by b
  for (const auto& c : rep.case_conditions)
    CHECK(c.bound == (c.family == 'S' ? const_a() : const_b()));

  // both error sums stay under 1/500
  for (const auto& c : rep.sums) CHECK(c.value_hi < Rational(1, 500));
}

TEST_CASE("margins only improve with precision", "[verifier]") {
  auto lo = check_case_conditions(128);
  auto hi = check_case_conditions(256);
  const auto* b1_lo = find_case(lo.case_conditions, 'B', 1);
  const auto* b1_hi = find_case(hi.case_conditions, 'B', 1);
  REQUIRE(b1_lo != nullptr);
  REQUIRE(b1_hi != nullptr);
  CHECK(b1_hi->margin_lo >= b1_lo->margin_lo);
  CHECK(hi.overall);
}

TEST_CASE("named constants", "[verifier]") {
  CHECK(const_a() == Rational(489, 50));
  CHECK(const_b() == Rational(867, 100));
  CHECK(to_string(Verdict::holds) == std::string("holds"));
  CHECK(to_string(Verdict::fails) == std::string("fails"));
  CHECK(to_string(Verdict::undecided) == std::string("undecided-at-precision"));
}

TEST_CASE("empirical theorem table through n = 12", "[verifier]") {
  auto rows = empirical_theorem_check(12);
  REQUIRE(rows.size() == 7);  // n = 6..12
  for (const auto& r : rows) {
    CHECK(r.holds);
    CHECK(r.g_b.has_value() == (r.n >= 9));
    CHECK(r.g_s > 0);
  }
  CHECK(rows[0].n == 6);
  CHECK(rows[0].g_s == 180);
  CHECK(rows.back().n == 12);
  CHECK(rows.back().g_s == 250884);
  REQUIRE(rows.back().g_b.has_value());
  CHECK(*rows.back().g_b == 36564);

  CHECK_THROWS_AS(empirical_theorem_check(5), std::invalid_argument);
  CHECK_THROWS_AS(empirical_theorem_check(40), std::invalid_argument);
}
