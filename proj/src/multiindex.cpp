#include "bellbound/multiindex.hpp"

#include <limits>

namespace bellbound {

MixedRadix::MixedRadix(std::vector<int> radices) : radix_(std::move(radices)) {
  for (int r : radix_) {
    if (r < 1) throw ValidationError("MixedRadix: every radix must be >= 1");
  }
  stride_.assign(radix_.size(), 1);
  total_ = 1;
  for (int i = static_cast<int>(radix_.size()) - 1; i >= 0; --i) {
    stride_[i] = total_;
    const auto r = static_cast<std::uint64_t>(radix_[i]);
    if (total_ > std::numeric_limits<std::uint64_t>::max() / r) {
      throw ValidationError("MixedRadix: index space overflows 64 bits");
    }
    total_ *= r;
  }
}

std::uint64_t MixedRadix::flatten(std::span<const int> digits) const {
  if (digits.size() != radix_.size()) {
    throw ValidationError("MixedRadix::flatten: digit count mismatch");
  }
  std::uint64_t flat = 0;
  for (std::size_t i = 0; i < radix_.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= radix_[i]) {
      throw ValidationError("MixedRadix::flatten: digit out of range");
    }
    flat += stride_[i] * static_cast<std::uint64_t>(digits[i]);
  }
  return flat;
}

std::vector<int> MixedRadix::unflatten(std::uint64_t flat) const {
  std::vector<int> out(radix_.size());
  unflatten_into(flat, out);
  return out;
}

void MixedRadix::unflatten_into(std::uint64_t flat, std::span<int> out) const {
  if (flat >= total_) throw ValidationError("MixedRadix::unflatten: index out of range");
  if (out.size() != radix_.size()) {
    throw ValidationError("MixedRadix::unflatten: output size mismatch");
  }
  for (std::size_t i = 0; i < radix_.size(); ++i) {
    out[i] = static_cast<int>(flat / stride_[i]);
    flat %= stride_[i];
  }
}

bool MixedRadix::next(std::span<int> digits) const {
  for (int i = static_cast<int>(radix_.size()) - 1; i >= 0; --i) {
    if (++digits[i] < radix_[i]) return true;
    digits[i] = 0;
  }
  return false;
}

std::uint64_t checked_count(std::span<const int> radices, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int r : radices) {
    if (r < 1) throw ValidationError("checked_count: every radix must be >= 1");
    const auto rr = static_cast<std::uint64_t>(r);
    if (total > std::numeric_limits<std::uint64_t>::max() / rr) {
      throw ValidationError("checked_count: count overflows 64 bits");
    }
    total *= rr;
    if (cap != 0 && total > cap) {
      throw ValidationError("checked_count: count " + std::to_string(total) +
                            " exceeds cap " + std::to_string(cap));
    }
  }
  return total;
}

}  // namespace bellbound
