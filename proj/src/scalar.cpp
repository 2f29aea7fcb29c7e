#include "exotic/scalar.hpp"

#include <charconv>

namespace exotic {

Scalar Scalar::apply(const Scalar& o, char op) const {
  require(exact_ == o.exact_, "mode mismatch in Scalar arithmetic");
  if (exact_) {
    switch (op) {
    case '+':
      return rational(q_ + o.q_);
    case '-':
      return rational(q_ - o.q_);
    case '*':
      return rational(q_ * o.q_);
    default:
      if (o.q_.is_zero())
        throw std::domain_error("Scalar division by zero");
      return rational(q_ / o.q_);
    }
  }
  switch (op) {
  case '+':
    return real(d_ + o.d_);
  case '-':
    return real(d_ - o.d_);
  case '*':
    return real(d_ * o.d_);
  default:
    return real(d_ / o.d_);
  }
}

std::string Scalar::to_string() const {
  if (exact_)
    return rat_to_string(q_);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d_);
  (void)ec;
  return std::string(buf, end);
}

} // namespace exotic
