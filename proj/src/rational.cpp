#include "polyplane/rational.hpp"

#include <stdexcept>

namespace polyplane {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num);
  r /= Rational(den);  // mpq division canonicalizes
  return r;
}

Rational parse_rational(std::string_view text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos)
    throw std::invalid_argument("empty rational literal");
  text = text.substr(begin, end - begin + 1);

  size_t slash = text.find('/');
  try {
    if (slash == std::string_view::npos)
      return Rational(BigInt(std::string(text)));
    BigInt num{std::string(text.substr(0, slash))};
    BigInt den{std::string(text.substr(slash + 1))};
    return make_rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: '" + std::string(text) +
                                "'");
  }
}

std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

BigInt rational_floor(const Rational& r) {
  BigInt num = numerator(r), den = denominator(r);
  BigInt q = num / den;  // truncated
  if (num < 0 && q * den != num) --q;
  return q;
}

Rational rational_mod(const Rational& r, const Rational& m) {
  if (!(m > 0)) throw std::invalid_argument("modulus must be positive");
  Rational out = r - Rational(rational_floor(Rational(r / m))) * m;
  if (out < 0 || out >= m) throw std::logic_error("rational_mod out of range");
  return out;
}

}  // namespace polyplane
