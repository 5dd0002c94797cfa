#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace skintone {

struct RgbColor {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const RgbColor&, const RgbColor&) = default;
};

/// CIE L*a*b* relative to the D65 white point.
struct LabColor {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Hue in degrees [0, 360), saturation and value in [0, 1].
struct HsvColor {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

/// Full-range BT.601 with chroma offset 128, all components in [0, 255].
struct YCrCbColor {
  double y = 0.0;
  double cr = 0.0;
  double cb = 0.0;
};

struct LinearRgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

enum class ItaVariant { Arctan, Arctan2 };

/// Five strictly descending ITA cut-offs in degrees separating the six
/// skin-type bins. Upper bounds are inclusive: t[k-1] >= ita > t[k].
class SkinTypeThresholds {
 public:
  SkinTypeThresholds();
  explicit SkinTypeThresholds(const std::array<double, 5>& cutoffs);

  const std::array<double, 5>& cutoffs() const noexcept { return cutoffs_; }
  double operator[](std::size_t i) const { return cutoffs_[i]; }

  friend bool operator==(const SkinTypeThresholds&, const SkinTypeThresholds&) = default;

 private:
  std::array<double, 5> cutoffs_;
};

/// ITA-binned skin type 1 (lightest) to 6 (darkest).
class SkinType {
 public:
  explicit SkinType(int value);

  int value() const noexcept { return value_; }
  std::size_t index() const noexcept { return static_cast<std::size_t>(value_ - 1); }

  friend auto operator<=>(const SkinType&, const SkinType&) = default;

 private:
  int value_;
};

inline constexpr int kSkinTypeCount = 6;

double srgb_to_linear(std::uint8_t channel) noexcept;
double linear_to_srgb(double linear) noexcept;

LabColor srgb_to_cielab(RgbColor c) noexcept;

/// Same conversion for fractional channel values in [0, 255], e.g. a mean colour.
LabColor srgb_to_cielab(double r, double g, double b) noexcept;
LinearRgb cielab_to_linear_rgb(LabColor lab) noexcept;

/// Inverse conversion; nullopt when the colour lies outside the sRGB gamut
/// by more than `tolerance` in linear units.
std::optional<RgbColor> cielab_to_srgb(LabColor lab, double tolerance = 1e-4) noexcept;

/// Inverse conversion with per-channel clipping to the gamut.
RgbColor cielab_to_srgb_clipped(LabColor lab) noexcept;

HsvColor srgb_to_hsv(RgbColor c) noexcept;
YCrCbColor srgb_to_ycrcb(RgbColor c) noexcept;

/// BT.601 luma rounded to an integer grey level. Fixed-point so that adding a
/// constant to all three channels shifts the result by exactly that constant.
std::uint8_t luma(RgbColor c) noexcept;

/// Individual Typology Angle in degrees.
///
/// Arctan evaluates atan((l - 50) / b) and lies in (-90, 90); it throws
/// Error(DegenerateAngle) when b == 0. Arctan2 is the quadrant-aware angle of
/// the point (b, l - 50) in (-180, 180]; it equals Arctan whenever b > 0.
double ita_degrees(double l, double b, ItaVariant variant);

SkinType bin_skin_type(double ita_deg, const SkinTypeThresholds& thresholds = {}) noexcept;

}  // namespace skintone
