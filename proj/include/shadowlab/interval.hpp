#pragma once

#include <mpfr.h>

#include <string>

#include "shadowlab/rational.hpp"

namespace shadowlab {

// Closed interval [lo, hi] with MPFR endpoints and outward rounding, so every
// operation returns an enclosure of the exact real result.
class Interval {
 public:
  static constexpr mpfr_prec_t kDefaultPrecision = 256;

  explicit Interval(mpfr_prec_t precision = kDefaultPrecision);
  Interval(Rational const& q, mpfr_prec_t precision);
  Interval(Interval const& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(Interval const& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  // Parses the hexadecimal endpoints written by lower_hex()/upper_hex().
  static Interval from_hex(std::string const& lo, std::string const& hi, mpfr_prec_t precision);

  // Enclosure of ln(q), q > 0.
  static Interval log(Rational const& q, mpfr_prec_t precision);

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(lo_); }
  mpfr_srcptr lower() const noexcept { return lo_; }
  mpfr_srcptr upper() const noexcept { return hi_; }

  // Exact rational values of the endpoints.
  Rational lower_rational() const;
  Rational upper_rational() const;
  Rational width() const { return upper_rational() - lower_rational(); }
  double midpoint() const;

  bool contains(Rational const& q) const;

  // Bit-exact textual endpoints ("%Ra" format).
  std::string lower_hex() const;
  std::string upper_hex() const;

  friend Interval operator+(Interval const& x, Interval const& y);
  friend Interval operator-(Interval const& x, Interval const& y);
  friend Interval operator*(Interval const& x, Interval const& y);
  // Divisor must not contain zero.
  friend Interval operator/(Interval const& x, Interval const& y);

  Interval abs() const;
  // x^e for x >= 0 and e > 0.
  Interval pow(Interval const& exponent) const;
  // Enclosure of the maximum of two intervals.
  static Interval max(Interval const& x, Interval const& y);

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace shadowlab
