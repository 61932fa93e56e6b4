#pragma once

#include <compare>
#include <ostream>

#include "ivr/capital.hpp"

namespace ivr {

/// Non-negative ratio num/den extended with infinity: any ratio whose
/// denominator is zero (0/0 included) is infinite. Infinite values are
/// mutually equal and exceed every finite value.
class ExtRatio {
 public:
  ExtRatio(Capital num, Capital den) : num_(std::move(num)), den_(std::move(den)) {}

  const Capital& numerator() const noexcept { return num_; }
  const Capital& denominator() const noexcept { return den_; }
  bool is_infinite() const noexcept { return den_.is_zero(); }

  friend std::strong_ordering ext_ratio_cmp(const ExtRatio& a, const ExtRatio& b) {
    if (a.is_infinite() || b.is_infinite()) {
      if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
      return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return (a.num_ * b.den_) <=> (b.num_ * a.den_);
  }

  friend std::strong_ordering operator<=>(const ExtRatio& a, const ExtRatio& b) { return ext_ratio_cmp(a, b); }
  friend bool operator==(const ExtRatio& a, const ExtRatio& b) { return ext_ratio_cmp(a, b) == 0; }

  friend std::ostream& operator<<(std::ostream& os, const ExtRatio& r) {
    return os << r.num_ << '/' << r.den_;
  }

 private:
  Capital num_;
  Capital den_;
};

}  // namespace ivr
