#include "skintone/thresholding.hpp"

#include <cmath>
#include <limits>

#include "skintone/error.hpp"

namespace skintone {

namespace {

// Cumulative statistics of levels 0..t. Integer sums are exact, so two splits
// separated only by empty bins see identical inputs and tie exactly.
struct Prefix {
  std::array<std::uint64_t, 256> count{};
  std::array<std::uint64_t, 256> sum{};
  std::array<std::uint64_t, 256> sum_sq{};
};

Prefix prefix_sums(const Histogram256& h) {
  Prefix p;
  std::uint64_t c = 0, s = 0, q = 0;
  for (std::uint64_t x = 0; x < 256; ++x) {
    c += h[x];
    s += h[x] * x;
    q += h[x] * x * x;
    p.count[x] = c;
    p.sum[x] = s;
    p.sum_sq[x] = q;
  }
  return p;
}

void require_bimodal_support(const Histogram256& h) {
  if (h.populated_levels() < 2)
    throw Error(Errc::DegenerateHistogram, "histogram needs at least two populated levels");
}

}  // namespace

Histogram256::Histogram256(const std::array<std::uint64_t, 256>& counts) : counts_(counts) {
  for (auto c : counts_) total_ += c;
  if (total_ == 0) throw Error(Errc::InvalidArgument, "histogram is empty");
}

Histogram256 Histogram256::from_levels(std::span<const std::uint8_t> levels) {
  std::array<std::uint64_t, 256> counts{};
  for (auto v : levels) ++counts[v];
  return Histogram256(counts);
}

int Histogram256::populated_levels() const noexcept {
  int n = 0;
  for (auto c : counts_) n += c > 0;
  return n;
}

int Histogram256::min_level() const noexcept {
  for (int i = 0; i < 256; ++i)
    if (counts_[i] > 0) return i;
  return -1;
}

int Histogram256::max_level() const noexcept {
  for (int i = 255; i >= 0; --i)
    if (counts_[i] > 0) return i;
  return -1;
}

void GhtParams::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw Error(Errc::InvalidArgument, "GHT nu must be >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(Errc::InvalidArgument, "GHT tau must be > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw Error(Errc::InvalidArgument, "GHT kappa must be >= 0");
  if (!(omega >= 0.0 && omega <= 1.0)) throw Error(Errc::InvalidArgument, "GHT omega must be in [0,1]");
}

int otsu_threshold(const Histogram256& histogram) {
  require_bimodal_support(histogram);
  const Prefix p = prefix_sums(histogram);
  const double total = static_cast<double>(p.count[255]);
  const double total_sum = static_cast<double>(p.sum[255]);

  int best_t = -1;
  double best = -1.0;
  for (int t = 0; t < 255; ++t) {
    const double w0 = static_cast<double>(p.count[t]);
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double s0 = static_cast<double>(p.sum[t]);
    // w0 * w1 * (mu0 - mu1)^2 rewritten over integer-valued sums.
    const double diff = w1 * s0 - w0 * (total_sum - s0);
    const double between = diff * diff / (w0 * w1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

int ght_threshold(const Histogram256& histogram, const GhtParams& params) {
  params.validate();
  require_bimodal_support(histogram);
  const Prefix p = prefix_sums(histogram);
  const double n_total = static_cast<double>(p.count[255]);
  const double s_total = static_cast<double>(p.sum[255]);
  const double q_total = static_cast<double>(p.sum_sq[255]);

  constexpr double kFloor = 1e-30;
  const double nu = params.nu;
  const double tau_sq = params.tau * params.tau;

  // Per-class score: -d/v - w log v + 2 (w + prior) log w, where v is the
  // posterior mode of the class variance.
  auto class_score = [&](double w_raw, double s, double q, double mix_prior) {
    const double w = std::max(kFloor, w_raw);
    const double d = w_raw > 0.0 ? q - s * s / w_raw : 0.0;
    const double prop = w / n_total;
    const double v = std::max(kFloor, (prop * nu * tau_sq + d) / (prop * nu + w));
    return -d / v - w * std::log(v) + 2.0 * (w + mix_prior) * std::log(w);
  };

  int best_t = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 255; ++t) {
    const double w0 = static_cast<double>(p.count[t]);
    const double s0 = static_cast<double>(p.sum[t]);
    const double q0 = static_cast<double>(p.sum_sq[t]);
    const double score = class_score(w0, s0, q0, params.kappa * params.omega) +
                         class_score(n_total - w0, s_total - s0, q_total - q0,
                                     params.kappa * (1.0 - params.omega));
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace skintone
