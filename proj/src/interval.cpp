#include "shadowlab/interval.hpp"

#include <algorithm>
#include <array>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

mpfr_prec_t common_precision(Interval const& x, Interval const& y) {
  return std::max(x.precision(), y.precision());
}

std::string to_hex(mpfr_srcptr v) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%Ra", v);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

Interval::Interval(mpfr_prec_t precision) {
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(Rational const& q, mpfr_prec_t precision) : Interval(precision) {
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(Interval const& other) : Interval(other.precision()) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.precision()) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(Interval const& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_hex(std::string const& lo, std::string const& hi, mpfr_prec_t precision) {
  Interval r(precision);
  if (mpfr_set_str(r.lo_, lo.c_str(), 0, MPFR_RNDD) != 0 || mpfr_set_str(r.hi_, hi.c_str(), 0, MPFR_RNDU) != 0) {
    throw ParseError("malformed interval endpoint '" + lo + "' / '" + hi + "'", 0);
  }
  if (mpfr_greater_p(r.lo_, r.hi_)) {
    throw ParseError("interval endpoints out of order", 0);
  }
  return r;
}

Interval Interval::log(Rational const& q, mpfr_prec_t precision) {
  if (q <= 0) {
    throw DomainError("log of a nonpositive number");
  }
  Interval r(q, precision);
  mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
  return r;
}

Rational Interval::lower_rational() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), lo_);
  return q;
}

Rational Interval::upper_rational() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), hi_);
  return q;
}

double Interval::midpoint() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

bool Interval::contains(Rational const& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

std::string Interval::lower_hex() const { return to_hex(lo_); }
std::string Interval::upper_hex() const { return to_hex(hi_); }

Interval operator+(Interval const& x, Interval const& y) {
  Interval r(common_precision(x, y));
  mpfr_add(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(Interval const& x, Interval const& y) {
  Interval r(common_precision(x, y));
  mpfr_sub(r.lo_, x.lo_, y.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, x.hi_, y.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(Interval const& x, Interval const& y) {
  mpfr_prec_t const p = common_precision(x, y);
  Interval r(p);
  std::array<mpfr_srcptr, 2> const xs{x.lo_, x.hi_};
  std::array<mpfr_srcptr, 2> const ys{y.lo_, y.hi_};
  mpfr_t t;
  mpfr_init2(t, p);
  bool first = true;
  for (auto a : xs) {
    for (auto b : ys) {
      mpfr_mul(t, a, b, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, a, b, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return r;
}

Interval operator/(Interval const& x, Interval const& y) {
  if (mpfr_sgn(y.lo_) <= 0 && mpfr_sgn(y.hi_) >= 0) {
    throw DomainError("interval division by an interval containing zero");
  }
  mpfr_prec_t const p = common_precision(x, y);
  Interval r(p);
  std::array<mpfr_srcptr, 2> const xs{x.lo_, x.hi_};
  std::array<mpfr_srcptr, 2> const ys{y.lo_, y.hi_};
  mpfr_t t;
  mpfr_init2(t, p);
  bool first = true;
  for (auto a : xs) {
    for (auto b : ys) {
      mpfr_div(t, a, b, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, a, b, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return r;
}

Interval Interval::abs() const {
  Interval r(precision());
  if (mpfr_sgn(lo_) >= 0) {
    return *this;
  }
  if (mpfr_sgn(hi_) <= 0) {
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }
  mpfr_set_zero(r.lo_, 1);
  if (mpfr_cmpabs(lo_, hi_) > 0) {
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  } else {
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
  }
  return r;
}

Interval Interval::pow(Interval const& exponent) const {
  if (mpfr_sgn(lo_) < 0 || mpfr_sgn(exponent.lo_) <= 0) {
    throw DomainError("interval pow requires a nonnegative base and positive exponent");
  }
  // Monotone in each argument separately, so the extremes sit at corners.
  mpfr_prec_t const p = common_precision(*this, exponent);
  Interval r(p);
  mpfr_t t;
  mpfr_init2(t, p);
  mpfr_pow(r.lo_, lo_, exponent.lo_, MPFR_RNDD);
  mpfr_pow(t, lo_, exponent.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_pow(r.hi_, hi_, exponent.lo_, MPFR_RNDU);
  mpfr_pow(t, hi_, exponent.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::max(Interval const& x, Interval const& y) {
  Interval r(common_precision(x, y));
  mpfr_max(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
  return r;
}

}  // namespace shadowlab
