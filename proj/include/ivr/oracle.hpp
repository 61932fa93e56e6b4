#pragma once

// Infinite binary sequences given by a total deterministic rule.
//
// Descriptor syntax:
//   periodic:<bits>                 the pattern repeated forever
//   seed:<u64>                      seeded pseudorandom bits
//   prefix:<bits>:<descriptor>      the explicit bits, then the fallback
//                                   sequence read from its own position 0
//
// Every sequence built here is computable. They stand in for the
// nonrecursive oracle of the theorem and cannot satisfy its hypothesis.

#include <charconv>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "ivr/bits.hpp"

namespace ivr {

class OracleSequence {
 public:
  using Generator = std::function<Bit(std::uint64_t)>;

  OracleSequence(Generator gen, std::string description)
      : gen_(std::make_shared<const Generator>(std::move(gen))), description_(std::move(description)) {}

  Bit bit(std::uint64_t n) const { return (*gen_)(n); }

  /// The first n bits.
  BitString prefix(std::uint64_t n) const {
    BitString out;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(bit(i));
    return out;
  }

  const std::string& description() const noexcept { return description_; }

 private:
  std::shared_ptr<const Generator> gen_;
  std::string description_;
};

inline Bit oracle_bit(const OracleSequence& a, std::uint64_t n) { return a.bit(n); }

/// The complement sequence, bit by bit.
inline OracleSequence complement(const OracleSequence& a) {
  return OracleSequence([a](std::uint64_t n) { return complement(a.bit(n)); }, "complement(" + a.description() + ")");
}

inline OracleSequence periodic_oracle(const BitString& pattern) {
  if (pattern.empty()) throw std::invalid_argument("periodic oracle needs a non-empty pattern");
  return OracleSequence([pattern](std::uint64_t n) { return pattern[n % pattern.size()]; },
                        "periodic:" + pattern.str());
}

namespace detail {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based pseudorandom bits: bit n depends only on (seed, n).
inline OracleSequence seeded_oracle(std::uint64_t seed) {
  return OracleSequence(
      [seed](std::uint64_t n) {
        std::uint64_t z = detail::mix64(seed + (n + 1) * 0x9e3779b97f4a7c15ULL);
        return (z >> 63) ? Bit::one : Bit::zero;
      },
      "seed:" + std::to_string(seed));
}

inline OracleSequence prefixed_oracle(const BitString& head, OracleSequence fallback) {
  std::string desc = "prefix:" + head.str() + ":" + fallback.description();
  return OracleSequence(
      [head, fallback = std::move(fallback)](std::uint64_t n) {
        return n < head.size() ? head[n] : fallback.bit(n - head.size());
      },
      std::move(desc));
}

inline OracleSequence parse_oracle(std::string_view descriptor) {
  auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("oracle descriptor missing ':': '" + std::string(descriptor) + "'");
  }
  std::string_view kind = descriptor.substr(0, colon);
  std::string_view rest = descriptor.substr(colon + 1);
  if (kind == "periodic") return periodic_oracle(BitString::parse(rest));
  if (kind == "seed") {
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), seed);
    if (rest.empty() || ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw std::invalid_argument("bad seed in oracle descriptor: '" + std::string(rest) + "'");
    }
    return seeded_oracle(seed);
  }
  if (kind == "prefix") {
    auto sep = rest.find(':');
    if (sep == std::string_view::npos) {
      throw std::invalid_argument("prefix oracle needs a fallback: '" + std::string(descriptor) + "'");
    }
    return prefixed_oracle(BitString::parse(rest.substr(0, sep)), parse_oracle(rest.substr(sep + 1)));
  }
  throw std::invalid_argument("unknown oracle kind '" + std::string(kind) + "'");
}

}  // namespace ivr
