#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bellbound/common.hpp"

namespace bellbound {

// Mixed-radix index over a fixed digit list. Digits are ordered
// most-significant first: under linear enumeration the LAST digit varies
// fastest. This is the single flattening convention used for setting tuples,
// outcome tuples and deterministic strategies.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<int> radices);

  std::uint64_t total() const { return total_; }
  int digit_count() const { return static_cast<int>(radix_.size()); }
  const std::vector<int>& radices() const { return radix_; }

  std::uint64_t flatten(std::span<const int> digits) const;
  std::vector<int> unflatten(std::uint64_t flat) const;
  void unflatten_into(std::uint64_t flat, std::span<int> out) const;

  // Lexicographic increment; returns false after the last tuple.
  bool next(std::span<int> digits) const;

 private:
  std::vector<int> radix_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t total_ = 1;
};

// Product of radices with an overflow guard; throws ValidationError when the
// count cannot be represented or exceeds `cap` (cap = 0 disables the cap).
std::uint64_t checked_count(std::span<const int> radices, std::uint64_t cap);

}  // namespace bellbound
