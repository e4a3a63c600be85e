#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace foresight {

// Exact rational number. Utilities, frontier aggregates and every value the
// solvers compare are carried as Rationals; nothing is ever rounded. Ties are
// semantically meaningful (strict-preference updates in the best-branch
// composition), which rules out floating point throughout.
class Rational {
 public:
  using Int = boost::multiprecision::cpp_int;

  Rational() : v_(0) {}
  Rational(long long value) : v_(value) {}  // NOLINT: implicit by design
  Rational(const Int& num, const Int& den);

  // Accepts an integer ("3", "-7"), a fraction ("3/4", "-1/2") or a decimal
  // literal ("0.25", "-12.5"), all parsed exactly. Anything else: nullopt.
  static std::optional<Rational> parse(std::string_view text);

  Int numerator() const { return boost::multiprecision::numerator(v_); }
  Int denominator() const { return boost::multiprecision::denominator(v_); }

  // Normalized form: "p/q", or plain "p" when the denominator is 1.
  // parse(x.str()) == x for every value.
  std::string str() const;

  bool is_zero() const { return v_.is_zero(); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);  // throws std::domain_error on /0

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.v_ != b.v_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.v_ <= b.v_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.v_ > b.v_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.v_ >= b.v_;
  }

  // Exact mean. Throws std::domain_error on an empty span.
  static Rational average(std::span<const Rational> xs);

 private:
  boost::multiprecision::cpp_rational v_;
};

}  // namespace foresight
