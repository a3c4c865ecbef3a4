#pragma once

#include <compare>
#include <limits>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "bipath/errors.hpp"

namespace bipath {

// An element of Q ∪ {-inf, +inf}. Denominators stay tiny here (1, 2, 4), so
// int64 numerators never come close to overflow.
class ExtRational {
 public:
  constexpr ExtRational() = default;
  constexpr ExtRational(std::int64_t n) : num_(n) {}  // NOLINT(implicit)
  ExtRational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw DomainError("zero denominator");
    normalize();
  }

  static constexpr ExtRational infinity() { return ExtRational(Inf::pos); }
  static constexpr ExtRational neg_infinity() { return ExtRational(Inf::neg); }

  bool is_finite() const { return inf_ == Inf::none; }
  bool is_pos_inf() const { return inf_ == Inf::pos; }
  bool is_neg_inf() const { return inf_ == Inf::neg; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.is_finite() && b.is_finite()) return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    if (a.inf_ != Inf::none && b.inf_ != Inf::none && a.inf_ != b.inf_)
      throw DomainError("inf - inf is undefined");
    return a.is_finite() ? b : a;
  }
  friend ExtRational operator-(const ExtRational& a) {
    if (a.is_pos_inf()) return neg_infinity();
    if (a.is_neg_inf()) return infinity();
    return {-a.num_, a.den_};
  }
  friend ExtRational operator-(const ExtRational& a, const ExtRational& b) { return a + (-b); }
  friend ExtRational operator*(const ExtRational& a, std::int64_t k) {
    if (!a.is_finite()) {
      if (k == 0) throw DomainError("inf * 0 is undefined");
      return (k > 0) == a.is_pos_inf() ? infinity() : neg_infinity();
    }
    return {a.num_ * k, a.den_};
  }
  friend ExtRational operator/(const ExtRational& a, std::int64_t k) {
    if (k <= 0) throw DomainError("division by a non-positive integer");
    if (!a.is_finite()) return a;
    return {a.num_, a.den_ * k};
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    return a.inf_ == b.inf_ && (a.inf_ != Inf::none || (a.num_ == b.num_ && a.den_ == b.den_));
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    auto rank = [](const ExtRational& x) { return x.is_neg_inf() ? 0 : x.is_finite() ? 1 : 2; };
    if (rank(a) != rank(b) || !a.is_finite()) return rank(a) <=> rank(b);
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  double to_double() const;

  // "inf", "-inf", "p" or "p/q".
  std::string to_string() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtRational& x) { return os << x.to_string(); }

 private:
  enum class Inf : std::uint8_t { none, pos, neg };
  constexpr explicit ExtRational(Inf i) : inf_(i) {}

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  Inf inf_ = Inf::none;
};

inline double ExtRational::to_double() const {
  if (is_pos_inf()) return std::numeric_limits<double>::infinity();
  if (is_neg_inf()) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

inline ExtRational abs(const ExtRational& x) { return x < ExtRational(0) ? -x : x; }

// |a - b| with the convention that equal infinities are at distance 0.
inline ExtRational endpoint_distance(const ExtRational& a, const ExtRational& b) {
  if (!a.is_finite() || !b.is_finite()) return a == b ? ExtRational(0) : ExtRational::infinity();
  return abs(a - b);
}

}  // namespace bipath
