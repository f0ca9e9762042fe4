#include "shadowlab/rational.hpp"

#include <cctype>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

// Returns one past the last digit; throws if there is no digit at `pos`.
std::size_t scan_digits(std::string_view text, std::size_t pos) {
  std::size_t const start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    ++pos;
  }
  if (pos == start) {
    throw ParseError("expected digit in rational '" + std::string(text) + "'", start);
  }
  return pos;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    ++pos;
  }
  pos = scan_digits(text, pos);
  if (pos < text.size() && text[pos] == '/') {
    std::size_t const slash = pos;
    pos = scan_digits(text, pos + 1);
    bool zero = true;
    for (std::size_t i = slash + 1; i < pos; ++i) {
      zero = zero && text[i] == '0';
    }
    if (zero) {
      throw ParseError("zero denominator in rational '" + std::string(text) + "'", slash + 1);
    }
  }
  if (pos != text.size()) {
    throw ParseError("trailing characters in rational '" + std::string(text) + "'", pos);
  }
  std::string digits(text);
  if (digits.front() == '+') {
    digits.erase(0, 1);
  }
  Rational result(digits, 10);
  result.canonicalize();
  return result;
}

std::string format(Rational const& x) { return x.get_str(10); }

Rational power(Rational const& base, std::int64_t exponent) {
  if (exponent < 0 && base == 0) {
    throw DomainError("negative power of zero");
  }
  std::uint64_t e = exponent < 0 ? static_cast<std::uint64_t>(-(exponent + 1)) + 1
                                 : static_cast<std::uint64_t>(exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational result = exponent < 0 ? Rational(den, num) : Rational(num, den);
  result.canonicalize();
  return result;
}

bool denominator_is_power_of(Rational const& x, std::int64_t n) {
  Integer den = x.get_den();
  Integer const base(static_cast<long>(n));
  while (den != 1) {
    if (!mpz_divisible_p(den.get_mpz_t(), base.get_mpz_t())) {
      return false;
    }
    den /= base;
  }
  return true;
}

}  // namespace shadowlab
