#pragma once

// Bits and finite binary strings.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ivr {

enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr Bit complement(Bit b) noexcept { return b == Bit::zero ? Bit::one : Bit::zero; }

constexpr char to_char(Bit b) noexcept { return b == Bit::zero ? '0' : '1'; }

constexpr int to_int(Bit b) noexcept { return static_cast<int>(b); }

inline Bit bit_from_char(char c) {
  if (c == '0') return Bit::zero;
  if (c == '1') return Bit::one;
  throw std::invalid_argument(std::string("not a bit: '") + c + "'");
}

inline std::ostream& operator<<(std::ostream& os, Bit b) { return os << to_char(b); }

/// A finite binary string. The empty string is the unique length-0 value.
class BitString {
 public:
  BitString() = default;

  /// Parses a string over {0,1}; throws std::invalid_argument otherwise.
  static BitString parse(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) out.bits_.push_back(to_char(bit_from_char(c)));
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  Bit operator[](std::size_t i) const { return bits_[i] == '0' ? Bit::zero : Bit::one; }

  Bit at(std::size_t i) const {
    if (i >= bits_.size()) throw std::out_of_range("BitString::at");
    return (*this)[i];
  }

  void push_back(Bit b) { bits_.push_back(to_char(b)); }

  /// sigma restricted to its first n bits; requires n <= size().
  BitString prefix(std::size_t n) const {
    if (n > bits_.size()) throw std::out_of_range("BitString::prefix: n exceeds length");
    BitString out;
    out.bits_ = bits_.substr(0, n);
    return out;
  }

  /// Bits from position n onward; requires n <= size().
  BitString suffix_from(std::size_t n) const {
    if (n > bits_.size()) throw std::out_of_range("BitString::suffix_from: n exceeds length");
    BitString out;
    out.bits_ = bits_.substr(n);
    return out;
  }

  BitString extended(Bit b) const {
    BitString out = *this;
    out.push_back(b);
    return out;
  }

  bool is_prefix_of(const BitString& other) const noexcept {
    return bits_.size() <= other.bits_.size() &&
           std::string_view(other.bits_).substr(0, bits_.size()) == bits_;
  }

  const std::string& str() const noexcept { return bits_; }

  friend BitString operator+(const BitString& a, const BitString& b) {
    BitString out;
    out.bits_ = a.bits_ + b.bits_;
    return out;
  }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString& a, const BitString& b) {
    // shortlex: length first, then lexicographic
    if (auto c = a.bits_.size() <=> b.bits_.size(); c != 0) return c;
    return a.bits_.compare(b.bits_) <=> 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const BitString& s) {
    return os << (s.empty() ? std::string_view("ε") : std::string_view(s.bits_));
  }

 private:
  std::string bits_;  // chars '0' / '1'
};

}  // namespace ivr

template <>
struct std::hash<ivr::BitString> {
  std::size_t operator()(const ivr::BitString& s) const noexcept {
    return std::hash<std::string>{}(s.str());
  }
};
