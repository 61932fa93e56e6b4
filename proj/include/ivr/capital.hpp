#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ivr {

/// Non-negative arbitrary-precision amount of capital, in quanta.
///
/// Subtracting past zero is a contract violation and throws
/// std::domain_error; there is no saturation.
class Capital {
 public:
  using integer = boost::multiprecision::cpp_int;

  Capital() = default;

  template <std::integral T>
  Capital(T v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      if (v < 0) throw std::domain_error("Capital cannot be negative");
    }
  }

  explicit Capital(integer v) : v_(std::move(v)) {
    if (v_ < 0) throw std::domain_error("Capital cannot be negative");
  }

  /// Parses a non-empty run of decimal digits.
  static Capital parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty integer");
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("not a non-negative decimal integer: '" + std::string(text) + "'");
      }
    }
    return Capital(integer(std::string(text)));
  }

  const integer& value() const noexcept { return v_; }
  bool is_zero() const noexcept { return v_.is_zero(); }
  std::string to_string() const { return v_.str(); }

  Capital& operator+=(const Capital& o) {
    v_ += o.v_;
    return *this;
  }
  Capital& operator-=(const Capital& o) {
    if (o.v_ > v_) throw std::domain_error("Capital subtraction below zero");
    v_ -= o.v_;
    return *this;
  }
  Capital& operator*=(const Capital& o) {
    v_ *= o.v_;
    return *this;
  }

  friend Capital operator+(Capital a, const Capital& b) { return a += b; }
  friend Capital operator-(Capital a, const Capital& b) { return a -= b; }
  friend Capital operator*(Capital a, const Capital& b) { return a *= b; }

  friend bool operator==(const Capital& a, const Capital& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Capital& a, const Capital& b) {
    int c = a.v_.compare(b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Capital& c) { return os << c.v_; }

 private:
  integer v_;
};

inline Capital abs_diff(const Capital& a, const Capital& b) { return a < b ? b - a : a - b; }

}  // namespace ivr
