#include "skintone/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "skintone/error.hpp"

namespace skintone {

namespace {

ItaResult make_result(Method method, ItaVariant variant, Status status) {
  ItaResult r;
  r.method = method;
  r.variant = variant;
  r.status = status;
  return r;
}

ItaResult make_ok(Method method, ItaVariant variant, double ita, std::size_t pixel_count,
                  const EstimatorConfig& cfg) {
  ItaResult r = make_result(method, variant, Status::Ok);
  r.ita_deg = ita;
  r.skin_type = bin_skin_type(ita, cfg.thresholds);
  r.pixel_count = pixel_count;
  return r;
}

double median_in_place(std::vector<double>& values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

// Median of the values lying within one standard deviation of the mean. With
// zero spread every value is retained.
std::optional<double> median_within_one_sigma(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / n);

  std::vector<double> kept;
  kept.reserve(values.size());
  for (double v : values)
    if (sigma == 0.0 || std::abs(v - mean) <= sigma) kept.push_back(v);
  if (kept.empty()) return std::nullopt;
  return median_in_place(kept);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Dlhss: return "Dlhss";
    case Method::ColorSeg: return "ColorSeg";
    case Method::RandomPatch: return "RandomPatch";
    case Method::Ght: return "Ght";
    case Method::GroundTruth: return "GroundTruth";
  }
  return "?";
}

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Ok: return "Ok";
    case Status::NoSkinDetected: return "NoSkinDetected";
    case Status::EmptyMask: return "EmptyMask";
    case Status::Degenerate: return "Degenerate";
    case Status::LesionDominated: return "LesionDominated";
    case Status::Error: return "Error";
  }
  return "?";
}

std::string_view to_string(ItaVariant variant) noexcept {
  return variant == ItaVariant::Arctan ? "Arctan" : "Arctan2";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  for (auto m : {Method::Dlhss, Method::ColorSeg, Method::RandomPatch, Method::Ght, Method::GroundTruth})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

std::optional<Status> parse_status(std::string_view text) noexcept {
  for (auto s : {Status::Ok, Status::NoSkinDetected, Status::EmptyMask, Status::Degenerate,
                 Status::LesionDominated, Status::Error})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

std::optional<ItaVariant> parse_variant(std::string_view text) noexcept {
  if (text == "Arctan") return ItaVariant::Arctan;
  if (text == "Arctan2") return ItaVariant::Arctan2;
  return std::nullopt;
}

bool SkinGates::accepts(RgbColor c) const noexcept {
  const HsvColor hsv = srgb_to_hsv(c);
  if (!hue.contains(hsv.h) || !saturation.contains(hsv.s) || !value.contains(hsv.v)) return false;
  const YCrCbColor ycc = srgb_to_ycrcb(c);
  return y.contains(ycc.y) && cr.contains(ycc.cr) && cb.contains(ycc.cb);
}

void EstimatorConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidArgument, what); };
  if (side < kMinStandardSide) fail("side must be >= " + std::to_string(kMinStandardSide));
  if (patch_size < 1 || patch_size > side) fail("patch_size must be in [1, side]");
  if (!(min_patch_usable >= 0.0 && min_patch_usable <= 1.0)) fail("min_patch_usable must be in [0,1]");
  for (const Interval* iv : {&gates.hue, &gates.saturation, &gates.value, &gates.y, &gates.cr, &gates.cb})
    if (!(iv->lo <= iv->hi)) fail("skin gate intervals must satisfy lo <= hi");
  if (blackhat_kernel < 3 || blackhat_kernel % 2 == 0) fail("blackhat_kernel must be odd and >= 3");
  if (blackhat_threshold < 0 || blackhat_threshold > 255) fail("blackhat_threshold must be in [0,255]");
  ght.validate();
}

std::array<PatchRect, 8> periphery_patches(int side, int patch_size) {
  const int far = side - patch_size;
  const int mid = far / 2;
  return {{
      {0, 0, patch_size},
      {far, 0, patch_size},
      {0, far, patch_size},
      {far, far, patch_size},
      {mid, 0, patch_size},
      {mid, far, patch_size},
      {0, mid, patch_size},
      {far, mid, patch_size},
  }};
}

ItaResult estimate_dlhss(const Image& image, const PixelMask& skin_mask, const EstimatorConfig& cfg) {
  if (!skin_mask.matches(image))
    throw Error(Errc::InvalidArgument, "skin mask dimensions do not match the image");

  std::vector<double> lightness;
  std::vector<double> yellow;
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!skin_mask[i]) continue;
    const LabColor lab = srgb_to_cielab(px[i]);
    lightness.push_back(lab.l);
    yellow.push_back(lab.b);
  }
  if (lightness.empty()) return make_result(Method::Dlhss, ItaVariant::Arctan2, Status::EmptyMask);

  const auto l = median_within_one_sigma(lightness);
  const auto b = median_within_one_sigma(yellow);
  if (!l || !b) return make_result(Method::Dlhss, ItaVariant::Arctan2, Status::Degenerate);

  const double ita = ita_degrees(*l, *b, ItaVariant::Arctan2);
  return make_ok(Method::Dlhss, ItaVariant::Arctan2, ita, lightness.size(), cfg);
}

ItaResult estimate_colorseg(const Image& image, const EstimatorConfig& cfg) {
  const GreyImage grey = to_grey(image);
  const Histogram256 histogram = Histogram256::from_levels(grey.values);

  // Lesions are darker than skin, so the class above the Otsu level is kept.
  // A single-level image has no split and every pixel is gated.
  int threshold = -1;
  if (histogram.populated_levels() >= 2) threshold = otsu_threshold(histogram);

  double sum_r = 0.0, sum_g = 0.0, sum_b = 0.0;
  std::size_t n = 0;
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (static_cast<int>(grey.values[i]) <= threshold) continue;
    if (!cfg.gates.accepts(px[i])) continue;
    sum_r += px[i].r;
    sum_g += px[i].g;
    sum_b += px[i].b;
    ++n;
  }
  if (n == 0) return make_result(Method::ColorSeg, ItaVariant::Arctan2, Status::NoSkinDetected);

  const double count = static_cast<double>(n);
  const LabColor lab = srgb_to_cielab(sum_r / count, sum_g / count, sum_b / count);
  const double ita = ita_degrees(lab.l, lab.b, ItaVariant::Arctan2);
  return make_ok(Method::ColorSeg, ItaVariant::Arctan2, ita, n, cfg);
}

ItaResult estimate_random_patch(const Image& image, ItaVariant variant, const EstimatorConfig& cfg,
                                const PixelMask* lesion_mask) {
  if (lesion_mask && !lesion_mask->matches(image))
    throw Error(Errc::InvalidArgument, "lesion mask dimensions do not match the image");

  const Image standard = standardize_geometry(image, cfg.side);
  const PixelMask hair = blackhat_hair_mask(standard, cfg.blackhat_kernel, cfg.blackhat_threshold);
  const auto patches = periphery_patches(cfg.side, cfg.patch_size);
  const double area = static_cast<double>(cfg.patch_size) * cfg.patch_size;

  bool found = false;
  double best_ita = -std::numeric_limits<double>::infinity();
  std::size_t best_count = 0;
  for (const PatchRect& patch : patches) {
    double sum = 0.0;
    std::size_t usable = 0;
    for (int y = patch.y; y < patch.y + patch.size; ++y) {
      for (int x = patch.x; x < patch.x + patch.size; ++x) {
        if (hair.at(x, y)) continue;
        const LabColor lab = srgb_to_cielab(standard.at(x, y));
        // atan((L-50)/b) has no value on the b* = 0 axis.
        if (variant == ItaVariant::Arctan && lab.b == 0.0) continue;
        sum += ita_degrees(lab.l, lab.b, variant);
        ++usable;
      }
    }
    if (usable == 0 || static_cast<double>(usable) < cfg.min_patch_usable * area) continue;
    const double mean = sum / static_cast<double>(usable);
    if (!found || mean > best_ita) {
      best_ita = mean;
      best_count = usable;
      found = true;
    }
  }
  if (!found) return make_result(Method::RandomPatch, variant, Status::Degenerate);

  ItaResult result = make_ok(Method::RandomPatch, variant, best_ita, best_count, cfg);
  if (lesion_mask) {
    const PixelMask lesion = standardize_geometry(*lesion_mask, cfg.side);
    const bool all_inside = std::all_of(patches.begin(), patches.end(), [&](const PatchRect& p) {
      return lesion.at(p.x + p.size / 2, p.y + p.size / 2);
    });
    if (all_inside) result.status = Status::LesionDominated;
  }
  return result;
}

ItaResult estimate_ght(const Image& image, const EstimatorConfig& cfg) {
  const Image standard = standardize_geometry(image, cfg.side);
  std::optional<Image> balanced;
  try {
    balanced = grey_world_balance(standard);
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroChannel) throw;
    return make_result(Method::Ght, ItaVariant::Arctan2, Status::Degenerate);
  }

  const GreyImage grey = to_grey(*balanced);
  const Histogram256 histogram = Histogram256::from_levels(grey.values);
  if (histogram.populated_levels() < 2)
    return make_result(Method::Ght, ItaVariant::Arctan2, Status::Degenerate);
  const int threshold = ght_threshold(histogram, cfg.ght);

  std::vector<double> itas;
  const auto px = balanced->pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (static_cast<int>(grey.values[i]) <= threshold) continue;
    const LabColor lab = srgb_to_cielab(px[i]);
    itas.push_back(ita_degrees(lab.l, lab.b, ItaVariant::Arctan2));
  }
  if (itas.empty()) return make_result(Method::Ght, ItaVariant::Arctan2, Status::NoSkinDetected);
  const std::size_t n = itas.size();
  const double ita = median_in_place(itas);
  return make_ok(Method::Ght, ItaVariant::Arctan2, ita, n, cfg);
}

}  // namespace skintone
