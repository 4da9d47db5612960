#include "nominal/data_value.hpp"

#include <numeric>
#include <stdexcept>

#include "nominal/errors.hpp"

namespace nominal {

const char* backend_name(Backend b) {
  switch (b) {
  case Backend::Equality:
    return "equality";
  case Backend::Order:
    return "order";
  case Backend::Graph:
    return "graph";
  }
  return "?";
}

DataValue DataValue::natural(std::int64_t n) {
  if (n < 0)
    throw UsageError("equality data must be natural numbers, got " + std::to_string(n));
  return DataValue(Backend::Equality, n, 1);
}

DataValue DataValue::vertex(std::int64_t n) {
  if (n < 0 || n >= (std::int64_t{1} << 62))
    throw UsageError("graph vertex out of range: " + std::to_string(n));
  return DataValue(Backend::Graph, n, 1);
}

DataValue DataValue::rational(std::int64_t num, std::int64_t den) {
  if (den == 0)
    throw UsageError("rational with zero denominator");
  if (den < 0) {
    if (num == INT64_MIN || den == INT64_MIN)
      throw std::overflow_error("rational out of range");
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return DataValue(Backend::Order, num, den);
}

DataValue DataValue::midpoint(const DataValue& a, const DataValue& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_ * 2;
  // Reduce in 128 bits before narrowing.
  __int128 x = n < 0 ? -n : n, y = d;
  while (y != 0) {
    __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    n /= x;
    d /= x;
  }
  if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
    throw std::overflow_error("rational midpoint exceeds 64-bit range");
  return rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

DataValue DataValue::plus_integer(std::int64_t k) const {
  __int128 n = static_cast<__int128>(num_) + static_cast<__int128>(k) * den_;
  if (n > INT64_MAX || n < -INT64_MAX)
    throw std::overflow_error("data value exceeds 64-bit range");
  switch (backend_) {
  case Backend::Order:
    return rational(static_cast<std::int64_t>(n), den_);
  case Backend::Equality:
    return natural(static_cast<std::int64_t>(n));
  case Backend::Graph:
    return vertex(static_cast<std::int64_t>(n));
  }
  return *this;
}

std::string DataValue::to_string() const {
  switch (backend_) {
  case Backend::Graph:
    return "g" + std::to_string(num_);
  case Backend::Order:
    if (den_ != 1)
      return std::to_string(num_) + "/" + std::to_string(den_);
    return std::to_string(num_);
  case Backend::Equality:
    return std::to_string(num_);
  }
  return "?";
}

std::strong_ordering operator<=>(const DataValue& a, const DataValue& b) {
  if (a.backend_ != b.backend_)
    return a.backend_ <=> b.backend_;
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  if (l < r)
    return std::strong_ordering::less;
  if (l > r)
    return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

} // namespace nominal
