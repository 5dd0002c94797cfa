#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "skintone/colorspace.hpp"
#include "skintone/image.hpp"
#include "skintone/thresholding.hpp"

namespace skintone {

/// Estimation method. GroundTruth tags analytically known values emitted by
/// the synthetic generator so they can share the tones CSV schema.
enum class Method { Dlhss, ColorSeg, RandomPatch, Ght, GroundTruth };

enum class Status { Ok, NoSkinDetected, EmptyMask, Degenerate, LesionDominated, Error };

std::string_view to_string(Method method) noexcept;
std::string_view to_string(Status status) noexcept;
std::string_view to_string(ItaVariant variant) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;
std::optional<Status> parse_status(std::string_view text) noexcept;
std::optional<ItaVariant> parse_variant(std::string_view text) noexcept;

/// Image-level outcome of one estimator.
struct ItaResult {
  std::string image_id;
  Method method = Method::Dlhss;
  ItaVariant variant = ItaVariant::Arctan2;
  double ita_deg = 0.0;
  std::optional<SkinType> skin_type;
  Status status = Status::Error;
  std::size_t pixel_count = 0;
  std::string message;  // diagnostic for Error rows, not serialized

  bool ok() const noexcept { return status == Status::Ok; }
  /// True when ita_deg carries a value (Ok, or a best-effort LesionDominated).
  bool has_value() const noexcept {
    return status == Status::Ok || status == Status::LesionDominated;
  }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

/// HSV and YCrCb skin-colour gates of the colour-segmentation method. A pixel
/// is skin when it lies inside all six intervals.
struct SkinGates {
  Interval hue{0.0, 25.0};
  Interval saturation{0.06, 0.67};
  Interval value{0.16, 1.0};
  Interval y{0.0, 255.0};
  Interval cr{135.0, 180.0};
  Interval cb{85.0, 135.0};

  bool accepts(RgbColor c) const noexcept;
};

struct EstimatorConfig {
  SkinTypeThresholds thresholds;
  int side = 200;
  int patch_size = 20;
  double min_patch_usable = 0.25;
  SkinGates gates;
  int blackhat_kernel = 17;
  int blackhat_threshold = 10;
  GhtParams ght;

  /// Throws Error(InvalidArgument) for inconsistent settings.
  void validate() const;
};

/// Method 1: ITA of the healthy-skin pixels selected by `skin_mask`. L* and b*
/// are aggregated independently as the median of the values within one
/// standard deviation of their mean.
ItaResult estimate_dlhss(const Image& image, const PixelMask& skin_mask, const EstimatorConfig& cfg);

/// Method 2: Otsu split of luma, brighter class gated in HSV and YCrCb, ITA of
/// the mean RGB of the surviving pixels.
ItaResult estimate_colorseg(const Image& image, const EstimatorConfig& cfg);

/// Method 3 (RP with Arctan, RP2 with Arctan2): eight periphery patches of the
/// standardized, hair-masked image; the brightest patch-mean ITA wins.
/// When `lesion_mask` is given (in the original image geometry) and all eight
/// patch centres fall inside it, the result is flagged LesionDominated.
ItaResult estimate_random_patch(const Image& image, ItaVariant variant, const EstimatorConfig& cfg,
                                const PixelMask* lesion_mask = nullptr);

/// Method 4: grey-world balance, GHT split of luma, median per-pixel ITA of
/// the brighter class (computed on the balanced pixels).
ItaResult estimate_ght(const Image& image, const EstimatorConfig& cfg);

struct PatchRect {
  int x = 0;
  int y = 0;
  int size = 0;
};

/// Four corners then four edge midpoints of a side x side image.
std::array<PatchRect, 8> periphery_patches(int side, int patch_size);

}  // namespace skintone
