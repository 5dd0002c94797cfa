#include "skintone/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skintone/error.hpp"

namespace skintone {

namespace {

// D65 reference white, Y normalised to 1.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kKappa = 24389.0 / 27.0;

double lab_f(double t) {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
  double cube = f * f * f;
  return cube > kEpsilon ? cube : (116.0 * f - 16.0) / kKappa;
}

const std::array<double, 256>& decode_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

std::uint8_t quantize(double encoded) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(encoded * 255.0), 0L, 255L));
}

}  // namespace

SkinTypeThresholds::SkinTypeThresholds() : cutoffs_{55.0, 41.0, 28.0, 19.0, 10.0} {}

SkinTypeThresholds::SkinTypeThresholds(const std::array<double, 5>& cutoffs) : cutoffs_(cutoffs) {
  for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
    if (!std::isfinite(cutoffs_[i]))
      throw Error(Errc::InvalidArgument, "skin type thresholds must be finite");
    if (i > 0 && !(cutoffs_[i] < cutoffs_[i - 1]))
      throw Error(Errc::InvalidArgument, "skin type thresholds must be strictly descending");
  }
}

SkinType::SkinType(int value) : value_(value) {
  if (value < 1 || value > kSkinTypeCount)
    throw Error(Errc::InvalidArgument, "skin type must be in 1..6, got " + std::to_string(value));
}

double srgb_to_linear(std::uint8_t channel) noexcept { return decode_table()[channel]; }

double linear_to_srgb(double linear) noexcept {
  return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

namespace {

LabColor linear_to_cielab(double r, double g, double b) noexcept {
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace

LabColor srgb_to_cielab(RgbColor c) noexcept {
  return linear_to_cielab(srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b));
}

LabColor srgb_to_cielab(double r, double g, double b) noexcept {
  auto decode = [](double v) {
    const double c = std::clamp(v, 0.0, 255.0) / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  return linear_to_cielab(decode(r), decode(g), decode(b));
}

LinearRgb cielab_to_linear_rgb(LabColor lab) noexcept {
  const double fy = (lab.l + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const double x = kWhiteX * lab_f_inv(fx);
  const double y = kWhiteY * lab_f_inv(fy);
  const double z = kWhiteZ * lab_f_inv(fz);
  return {
      3.2404542 * x - 1.5371385 * y - 0.4985314 * z,
      -0.9692660 * x + 1.8760108 * y + 0.0415560 * z,
      0.0556434 * x - 0.2040259 * y + 1.0572252 * z,
  };
}

std::optional<RgbColor> cielab_to_srgb(LabColor lab, double tolerance) noexcept {
  const LinearRgb lin = cielab_to_linear_rgb(lab);
  for (double v : {lin.r, lin.g, lin.b}) {
    if (!std::isfinite(v) || v < -tolerance || v > 1.0 + tolerance) return std::nullopt;
  }
  return cielab_to_srgb_clipped(lab);
}

RgbColor cielab_to_srgb_clipped(LabColor lab) noexcept {
  const LinearRgb lin = cielab_to_linear_rgb(lab);
  auto encode = [](double v) { return quantize(linear_to_srgb(std::clamp(v, 0.0, 1.0))); };
  return {encode(lin.r), encode(lin.g), encode(lin.b)};
}

HsvColor srgb_to_hsv(RgbColor c) noexcept {
  const int hi = std::max({c.r, c.g, c.b});
  const int lo = std::min({c.r, c.g, c.b});
  const double delta = hi - lo;

  HsvColor out;
  out.v = hi / 255.0;
  out.s = hi == 0 ? 0.0 : delta / hi;
  if (delta == 0) return out;  // achromatic: hue 0 by convention

  double h;
  if (hi == c.r)
    h = 60.0 * ((c.g - c.b) / delta);
  else if (hi == c.g)
    h = 60.0 * ((c.b - c.r) / delta + 2.0);
  else
    h = 60.0 * ((c.r - c.g) / delta + 4.0);
  if (h < 0.0) h += 360.0;
  out.h = h >= 360.0 ? h - 360.0 : h;
  return out;
}

YCrCbColor srgb_to_ycrcb(RgbColor c) noexcept {
  const double y = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
  const double cr = (c.r - y) * 0.713 + 128.0;
  const double cb = (c.b - y) * 0.564 + 128.0;
  return {std::clamp(y, 0.0, 255.0), std::clamp(cr, 0.0, 255.0), std::clamp(cb, 0.0, 255.0)};
}

std::uint8_t luma(RgbColor c) noexcept {
  return static_cast<std::uint8_t>((299 * c.r + 587 * c.g + 114 * c.b + 500) / 1000);
}

double ita_degrees(double l, double b, ItaVariant variant) {
  constexpr double kToDegrees = 180.0 / std::numbers::pi;
  if (variant == ItaVariant::Arctan) {
    if (b == 0.0) throw Error(Errc::DegenerateAngle, "arctan ITA undefined for b* = 0");
    return std::atan((l - 50.0) / b) * kToDegrees;
  }
  // +0.0 so that b == -0.0 is treated like b == 0 rather than the negative axis.
  return std::atan2(l - 50.0, b + 0.0) * kToDegrees;
}

SkinType bin_skin_type(double ita_deg, const SkinTypeThresholds& thresholds) noexcept {
  for (int k = 0; k < 5; ++k) {
    if (ita_deg > thresholds[k]) return SkinType(k + 1);
  }
  return SkinType(6);
}

}  // namespace skintone
