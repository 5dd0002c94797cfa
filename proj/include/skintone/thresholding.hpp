#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace skintone {

/// Grey-level histogram over 256 bins.
class Histogram256 {
 public:
  /// Throws Error(InvalidArgument) if all counts are zero.
  explicit Histogram256(const std::array<std::uint64_t, 256>& counts);

  static Histogram256 from_levels(std::span<const std::uint8_t> levels);

  const std::array<std::uint64_t, 256>& counts() const noexcept { return counts_; }
  std::uint64_t operator[](std::size_t level) const { return counts_[level]; }
  std::uint64_t total() const noexcept { return total_; }
  int populated_levels() const noexcept;
  int min_level() const noexcept;
  int max_level() const noexcept;

 private:
  std::array<std::uint64_t, 256> counts_;
  std::uint64_t total_ = 0;
};

/// Priors of the generalized histogram threshold: nu and tau shape an
/// inverse-gamma-like prior on each class variance, kappa and omega a beta
/// prior on the mixing weight.
struct GhtParams {
  double nu = 1e10;
  double tau = 0.01;
  double kappa = 0.0;
  double omega = 0.5;

  /// Throws Error(InvalidArgument) when a parameter is out of range.
  void validate() const;
};

/// Otsu's threshold: the level t maximising between-class variance for the
/// split {<= t} / {> t}. Ties resolve to the smallest t.
/// Throws Error(DegenerateHistogram) with fewer than two populated levels.
int otsu_threshold(const Histogram256& histogram);

/// Generalized histogram threshold: MAP score of a two-Gaussian mixture with
/// conjugate priors, enumerated over all 255 splits. Ties resolve to the
/// smallest t. Throws Error(DegenerateHistogram) like otsu_threshold.
int ght_threshold(const Histogram256& histogram, const GhtParams& params = {});

}  // namespace skintone
