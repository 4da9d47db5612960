#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace nominal {

enum class Backend { Equality, Order, Graph };

const char* backend_name(Backend b);

/// A concrete datum of one of the three backends.
///
/// Equality data and graph vertices are naturals (den == 1); order data are
/// exact rationals kept in lowest terms with a positive denominator.
class DataValue {
public:
  DataValue() = default;

  static DataValue natural(std::int64_t n);
  static DataValue rational(std::int64_t num, std::int64_t den);
  static DataValue vertex(std::int64_t n);

  Backend backend() const { return backend_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  /// Exact midpoint of two rationals; throws std::overflow_error if the
  /// result does not fit.
  static DataValue midpoint(const DataValue& a, const DataValue& b);
  DataValue plus_integer(std::int64_t k) const;

  std::string to_string() const;

  friend bool operator==(const DataValue& a, const DataValue& b) {
    return a.backend_ == b.backend_ && a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const DataValue& a, const DataValue& b);

private:
  DataValue(Backend b, std::int64_t num, std::int64_t den) : backend_(b), num_(num), den_(den) {}

  Backend backend_ = Backend::Equality;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct DataValueHash {
  std::size_t operator()(const DataValue& v) const {
    std::size_t h = std::hash<std::int64_t>{}(v.num());
    h ^= std::hash<std::int64_t>{}(v.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(v.backend());
  }
};

} // namespace nominal
