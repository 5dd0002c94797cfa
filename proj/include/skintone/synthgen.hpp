#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "skintone/estimators.hpp"
#include "skintone/image.hpp"

namespace skintone {

/// Parameters of one synthetic skin image: a uniform skin field, a centred
/// lesion disc, dark random-walk hair strokes, sRGB Gaussian noise and global
/// channel gains, applied in that order.
struct SyntheticSpec {
  LabColor skin_lab{65.0, 10.0, 15.0};
  LabColor lesion_lab{35.0, 15.0, 15.0};
  double lesion_radius_frac = 0.2;  // of min(width, height)
  int hair_count = 0;
  int hair_width = 3;
  double noise_sigma = 0.0;
  std::array<double, 3> channel_gains{1.0, 1.0, 1.0};
  int width = 600;
  int height = 450;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidArgument) for out-of-range numeric fields.
  void validate() const;
};

inline constexpr RgbColor kHairColor{30, 25, 20};

struct SyntheticSample {
  Image image;
  ItaResult ground_truth;  // Method::GroundTruth, Arctan2 ITA of skin_lab
  PixelMask lesion_mask;
  PixelMask skin_mask;  // complement of lesion_mask
  PixelMask hair_mask;  // drawn over either region
};

/// Throws Error(OutOfGamut) when skin_lab (or lesion_lab with a visible
/// lesion) has no sRGB representation.
SyntheticSample generate_synthetic(const SyntheticSpec& spec);

/// Ground-truth row for a spec without rendering it.
ItaResult synthetic_ground_truth(const SyntheticSpec& spec, const SkinTypeThresholds& thresholds = {});

/// A corpus of `count` images sharing `base`; image i uses seed base.seed + i.
/// When a range is set the skin Lab component is drawn uniformly from it per
/// image (redrawn until in gamut).
struct CorpusSpec {
  SyntheticSpec base;
  std::size_t count = 1;
  std::string prefix = "synth";
  std::optional<Interval> skin_l_range;
  std::optional<Interval> skin_a_range;
  std::optional<Interval> skin_b_range;
};

/// key=value spec file. Keys: skin_lab, lesion_lab (L,a,b), lesion_radius_frac,
/// hair_count, hair_width, noise_sigma, channel_gains (r,g,b), side (sets
/// width and height), width, height, seed, count, prefix, skin_l_range,
/// skin_a_range, skin_b_range (lo,hi).
CorpusSpec parse_corpus_spec(std::string_view text, const std::string& source);
CorpusSpec read_corpus_spec(const std::filesystem::path& path);

/// Per-image specs with ids `<prefix>_<index>` (zero padded to four digits).
std::vector<std::pair<std::string, SyntheticSpec>> expand_corpus(const CorpusSpec& corpus);

/// Writes images/<id>.png, masks/<id>_mask.png (skin), masks/<id>_lesion.png
/// and ground_truth.csv under `out_dir`. Returns the ground-truth rows.
std::vector<ItaResult> write_synthetic_corpus(const std::filesystem::path& out_dir, const CorpusSpec& corpus);

}  // namespace skintone
