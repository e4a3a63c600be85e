#include "foresight/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace foresight {

namespace mp = boost::multiprecision;

Rational::Rational(const Int& num, const Int& den) {
  if (den.is_zero()) {
    throw std::domain_error("rational with zero denominator");
  }
  v_ = mp::cpp_rational(num, den);
}

Rational Rational::operator-() const {
  Rational r;
  r.v_ = -v_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.v_.is_zero()) {
    throw std::domain_error("rational division by zero");
  }
  v_ /= o.v_;
  return *this;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;

  Int num;
  Int den = 1;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = text.substr(0, slash);
    auto d = text.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d)) return std::nullopt;
    num = Int(std::string(n));
    den = Int(std::string(d));
    if (den.is_zero()) return std::nullopt;
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    num = Int(std::string(whole) + std::string(frac));
    den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  } else {
    if (!all_digits(text)) return std::nullopt;
    num = Int(std::string(text));
  }
  if (negative) num = -num;
  return Rational(num, den);
}

std::string Rational::str() const {
  std::string out = numerator().str();
  if (denominator() != 1) {
    out += "/";
    out += denominator().str();
  }
  return out;
}

Rational Rational::average(std::span<const Rational> xs) {
  if (xs.empty()) {
    throw std::domain_error("average of an empty set");
  }
  Rational sum;
  for (const auto& x : xs) sum += x;
  return sum / Rational(static_cast<long long>(xs.size()));
}

}  // namespace foresight
