#include "exotic/rational.hpp"

namespace exotic {

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i)
    r *= i;
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n)
    return 0;
  if (k > n - k)
    k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i; // exact at every step: r is C(n-k+i, i)
  }
  return r;
}

std::string rat_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

Rat rat_from_string(const std::string& text) {
  auto parse_int = [](const std::string& part) -> BigInt {
    size_t b = part.find_first_not_of(" \t");
    size_t e = part.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw std::invalid_argument("empty integer in rational literal");
    std::string core = part.substr(b, e - b + 1);
    size_t i = (core[0] == '+' || core[0] == '-') ? 1 : 0;
    if (i == core.size())
      throw std::invalid_argument("sign without digits in rational literal");
    for (size_t j = i; j < core.size(); ++j)
      if (core[j] < '0' || core[j] > '9')
        throw std::invalid_argument("bad character in rational literal: " +
                                    core);
    return BigInt(core);
  };
  size_t slash = text.find('/');
  if (slash == std::string::npos)
    return Rat(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0)
    throw std::invalid_argument("zero denominator in rational literal");
  return Rat(num, den);
}

} // namespace exotic
