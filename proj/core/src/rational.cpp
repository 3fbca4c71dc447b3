#include "lola/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace lola {
namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = std::numeric_limits<std::int64_t>::min();

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_parts(num, den);
}

Rational Rational::from_parts(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > kMax || num < kMin || den > kMax)
    throw RationalOverflow("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::optional<Rational> Rational::parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  i128 num = 0;
  i128 den = 1;
  bool any_digit = false;
  constexpr i128 kLimit = static_cast<i128>(1) << 100;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
    num = num * 10 + (text[i] - '0');
    any_digit = true;
    if (num > kLimit) return std::nullopt;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      num = num * 10 + (text[i] - '0');
      den *= 10;
      any_digit = true;
      if (num > kLimit || den > kLimit) return std::nullopt;
    }
  }
  if (!any_digit) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    int exponent = 0;
    bool exp_digit = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      exponent = exponent * 10 + (text[i] - '0');
      exp_digit = true;
      if (exponent > 30) return std::nullopt;
    }
    if (!exp_digit) return std::nullopt;
    for (int k = 0; k < exponent; ++k) {
      if (exp_negative)
        den *= 10;
      else
        num *= 10;
      if (num > kLimit || den > kLimit) return std::nullopt;
    }
  }
  if (i != text.size()) return std::nullopt;
  try {
    return from_parts(negative ? -num : num, den);
  } catch (const RationalOverflow&) {
    return std::nullopt;
  }
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_decimal(int max_fraction_digits) const {
  i128 den = den_;
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  bool exact = den == 1;

  i128 n = num_;
  bool negative = n < 0;
  if (negative) n = -n;
  i128 d = den_;
  i128 whole = n / d;
  i128 rem = n % d;
  std::string digits;
  int count = 0;
  while (rem != 0 && (exact || count < max_fraction_digits)) {
    rem *= 10;
    digits.push_back(static_cast<char>('0' + static_cast<int>(rem / d)));
    rem %= d;
    ++count;
  }
  if (!exact && rem * 2 >= d) {
    // Round half-up, carrying into the integer part if needed.
    int pos = static_cast<int>(digits.size()) - 1;
    while (pos >= 0) {
      if (digits[pos] == '9') {
        digits[pos] = '0';
        --pos;
      } else {
        ++digits[pos];
        break;
      }
    }
    if (pos < 0) ++whole;
  }
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  if (digits.empty()) digits = "0";

  std::string whole_text;
  if (whole == 0) {
    whole_text = "0";
  } else {
    while (whole > 0) {
      whole_text.insert(whole_text.begin(),
                        static_cast<char>('0' + static_cast<int>(whole % 10)));
      whole /= 10;
    }
  }
  bool is_zero = whole_text == "0" && digits == "0";
  return (negative && !is_zero ? "-" : "") + whole_text + "." + digits;
}

std::string Rational::to_fraction() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::reciprocal() const {
  return from_parts(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_parts(
      static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
      static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_parts(
      static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
      static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_parts(static_cast<i128>(a.num_) * b.num_,
                              static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::from_parts(static_cast<i128>(a.num_) * b.den_,
                              static_cast<i128>(a.den_) * b.num_);
}

Rational Rational::operator-() const { return from_parts(-static_cast<i128>(num_), den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 lhs = static_cast<i128>(a.num_) * b.den_;
  i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  i128 num = gcd128(a.num(), b.num());
  i128 den_gcd = gcd128(a.den(), b.den());
  i128 den = static_cast<i128>(a.den()) / den_gcd * b.den();
  return Rational::from_parts(num, den);
}

Rational rational_lcm(const Rational& a, const Rational& b) {
  i128 num_gcd = gcd128(a.num(), b.num());
  i128 num = static_cast<i128>(a.num()) / num_gcd * b.num();
  if (num < 0) num = -num;
  i128 den = gcd128(a.den(), b.den());
  return Rational::from_parts(num, den);
}

}  // namespace lola
