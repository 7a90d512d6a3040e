#pragma once

#include <stdexcept>
#include <string>

namespace bellbound {

// Centralized tolerance policy. Exact-arithmetic comparisons are avoided
// throughout; these are the only thresholds modules may use.
namespace tol {
inline constexpr double feasibility = 1e-9;   // constraint / normalization checks
inline constexpr double reporting = 1e-6;     // value comparisons in reports
inline constexpr double psd = 1e-10;          // eigenvalue nonnegativity slack
inline constexpr double entry = 1e-12;        // per-entry nonnegativity slack
}  // namespace tol

inline constexpr std::uint64_t kDefaultStrategyCap = 10'000'000;
inline constexpr std::uint64_t kDefaultCopiedSpaceCap = 4096;
inline constexpr int kDefaultSiteSpaceCap = 256;

// Invalid inputs, shape mismatches, broken invariants of user-supplied data.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Iteration caps hit, solver breakdown, residuals out of tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bellbound
