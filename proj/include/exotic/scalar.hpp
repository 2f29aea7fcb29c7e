#pragma once

#include "exotic/rational.hpp"

#include <string>

namespace exotic {

// Mode-tagged number: exact rational or binary64. Arithmetic between the two
// modes is a usage error and throws, so exact pipelines cannot silently decay
// to floating point.
class Scalar {
public:
  Scalar() : exact_(true), q_(0), d_(0) {}
  static Scalar rational(Rat v) {
    Scalar s;
    s.exact_ = true;
    s.q_ = std::move(v);
    return s;
  }
  static Scalar real(double v) {
    Scalar s;
    s.exact_ = false;
    s.d_ = v;
    return s;
  }

  bool is_exact() const { return exact_; }
  const Rat& rat() const {
    require(exact_, "rational value requested from floating Scalar");
    return q_;
  }
  double as_double() const { return exact_ ? q_.convert_to<double>() : d_; }

  Scalar operator+(const Scalar& o) const { return apply(o, '+'); }
  Scalar operator-(const Scalar& o) const { return apply(o, '-'); }
  Scalar operator*(const Scalar& o) const { return apply(o, '*'); }
  Scalar operator/(const Scalar& o) const { return apply(o, '/'); }
  Scalar operator-() const {
    return exact_ ? rational(-q_) : real(-d_);
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  bool operator==(const Scalar& o) const {
    require(exact_ == o.exact_, "mode mismatch in Scalar comparison");
    return exact_ ? q_ == o.q_ : d_ == o.d_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool is_zero() const { return exact_ ? q_.is_zero() : d_ == 0.0; }

  // "p/q" in exact mode, shortest round-trip decimal in floating mode.
  std::string to_string() const;

  static Scalar zero(bool exact) {
    return exact ? rational(Rat(0)) : real(0.0);
  }

private:
  Scalar apply(const Scalar& o, char op) const;
  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  bool exact_;
  Rat q_;
  double d_;
};

} // namespace exotic
