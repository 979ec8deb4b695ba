#pragma once

#include "peelkit/rational.hpp"

#include <mpfr.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace peelkit {

inline long default_precision_bits() {
  if (const char* env = std::getenv("PEELKIT_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= MPFR_PREC_MIN && v <= 1 << 20) return v;
  }
  return 128;
}

// Closed interval [lo, hi] of MPFR floats at a fixed working precision. Every
// operation rounds the lower endpoint down and the upper endpoint up, so a
// value once enclosed stays enclosed. This is the only piece of the verifier
// allowed to touch floating point.
class Interval {
 public:
  explicit Interval(long prec = default_precision_bits()) : prec_(check_prec(prec)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);  // same precision: exact
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }

  Interval& operator=(const Interval& o) {
    if (this != &o) {
      mpfr_set_prec(lo_, o.prec_);
      mpfr_set_prec(hi_, o.prec_);
      prec_ = o.prec_;
      mpfr_set(lo_, o.lo_, MPFR_RNDD);
      mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
  }

  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  long precision() const { return prec_; }

  static Interval from_rational(const Rational& q, long prec = default_precision_bits()) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static Interval from_bigint(const BigInt& z, long prec = default_precision_bits()) {
    Interval r(prec);
    mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
    return r;
  }

  // log2 of a positive rational; monotone, so rounding the argument toward the
  // endpoint keeps the enclosure valid.
  static Interval log2_of(const Rational& q, long prec = default_precision_bits()) {
    if (sgn(q) <= 0) throw std::invalid_argument("log2 needs a positive argument");
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, check_prec(prec));
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDD);
    mpfr_log2(r.lo_, t, MPFR_RNDD);
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDU);
    mpfr_log2(r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
  }

  static Interval exp2_of(const Interval& x) {
    Interval r(x.prec_);
    mpfr_exp2(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp2(r.hi_, x.hi_, MPFR_RNDU);
    return r;
  }

  // base^expo for positive rational base and rational exponent
  static Interval pow(const Rational& base, const Rational& expo,
                      long prec = default_precision_bits()) {
    return exp2_of(log2_of(base, prec).scaled(expo));
  }

  Interval add(const Interval& o) const {
    Interval r(prec_);
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
  }

  Interval sub(const Interval& o) const {
    Interval r(prec_);
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
  }

  Interval mul(const Interval& o) const {
    Interval r(prec_);
    mpfr_t t;
    mpfr_init2(t, prec_);
    bool first = true;
    const mpfr_srcptr xs[2] = {lo_, hi_};
    const mpfr_srcptr ys[2] = {o.lo_, o.hi_};
    for (auto x : xs)
      for (auto y : ys) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    mpfr_clear(t);
    return r;
  }

  // multiplication by an exact rational scalar
  Interval scaled(const Rational& q) const {
    Interval r(prec_);
    if (sgn(q) >= 0) {
      mpfr_mul_q(r.lo_, lo_, q.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(r.hi_, hi_, q.get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(r.lo_, hi_, q.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(r.hi_, lo_, q.get_mpq_t(), MPFR_RNDU);
    }
    return r;
  }

  // pointwise max (encloses max of any two enclosed values)
  Interval max_with(const Interval& o) const {
    Interval r(prec_);
    mpfr_max(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
  }

  void clamp(const Rational& lo_bound, const Rational& hi_bound) {
    if (mpfr_cmp_q(lo_, lo_bound.get_mpq_t()) < 0) mpfr_set_q(lo_, lo_bound.get_mpq_t(), MPFR_RNDD);
    if (mpfr_cmp_q(hi_, hi_bound.get_mpq_t()) > 0) mpfr_set_q(hi_, hi_bound.get_mpq_t(), MPFR_RNDU);
  }

  // exact dyadic endpoints
  Rational lo() const { return to_rational(lo_); }
  Rational hi() const { return to_rational(hi_); }

  bool certainly_le(const Rational& bound) const { return mpfr_cmp_q(hi_, bound.get_mpq_t()) <= 0; }
  bool certainly_gt(const Rational& bound) const { return mpfr_cmp_q(lo_, bound.get_mpq_t()) > 0; }
  bool certainly_le(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }
  bool certainly_gt(const Interval& o) const { return mpfr_cmp(lo_, o.hi_) > 0; }

  std::string to_string(int digits = 17) const {
    return "[" + format(lo_, digits) + ", " + format(hi_, digits) + "]";
  }

 private:
  static long check_prec(long prec) {
    if (prec < MPFR_PREC_MIN || prec > (1 << 20)) throw std::invalid_argument("bad precision");
    return prec;
  }

  static Rational to_rational(mpfr_srcptr x) {
    if (!mpfr_number_p(x)) throw std::runtime_error("non-finite interval endpoint");
    if (mpfr_zero_p(x)) return Rational(0);
    BigInt mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
    Rational r(mant);
    if (e >= 0) {
      mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
      mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    r.canonicalize();
    return r;
  }

  static std::string format(mpfr_srcptr x, int digits) {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*Re", digits, x);
    return buf;
  }

  mpfr_t lo_, hi_;
  long prec_;
};

}  // namespace peelkit
