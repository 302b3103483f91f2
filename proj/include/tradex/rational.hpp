#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tradex {

// Exact rational number backed by GMP's arbitrary-precision mpq_class.
// Always held in canonical form (lowest terms, positive denominator).
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : value_(n) {}  // NOLINT: implicit by design, mirrors int literals
  Rational(long num, long den) : value_(num, den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    value_.canonicalize();
  }
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  // Accepts "3", "-3", "p/q" with arbitrary-precision parts. Returns nullopt on
  // malformed input or zero denominator.
  static std::optional<Rational> parse(const std::string& text);

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_negative() const { return sgn(value_) < 0; }
  bool is_positive() const { return sgn(value_) > 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  // Lowest terms; integers print without the "/1" suffix.
  std::string str() const {
    return value_.get_str();
  }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

 private:
  mpq_class value_;
};

inline std::optional<Rational> Rational::parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  const std::string num_part = slash == std::string::npos ? text : text.substr(0, slash);
  const std::string den_part = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (num_part.empty() || den_part.empty()) return std::nullopt;
  if (den_part.find('/') != std::string::npos) return std::nullopt;
  mpz_class num, den;
  if (num.set_str(num_part, 10) != 0) return std::nullopt;
  if (den.set_str(den_part, 10) != 0) return std::nullopt;
  if (den == 0) return std::nullopt;
  mpq_class q(num, den);
  q.canonicalize();
  return Rational(std::move(q));
}

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const Rational& r);

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

}  // namespace tradex

#include <ostream>

namespace tradex {
inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }
}  // namespace tradex
