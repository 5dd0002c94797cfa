#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "skintone/estimators.hpp"

namespace skintone {

/// Image files (.png, .jpg, .jpeg; case-insensitive) in `dir`, sorted by
/// image id. Files whose stem ends in "_mask" or "_lesion" are skipped.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

std::string image_id_of(const std::filesystem::path& image_path);

/// `<mask_dir>/<image_id>_mask.png`
std::filesystem::path mask_path_for(const std::filesystem::path& mask_dir, std::string_view image_id);

/// Runs one estimator over every image in `image_dir`. Results come back in
/// image-id order regardless of `jobs`; failures on individual images become
/// Status::Error rows. Dlhss requires `mask_dir` (Error(MissingMaskDir)).
/// `variant` only matters for RandomPatch; the other methods use Arctan2.
/// RandomPatch picks up `<mask_dir>/<image_id>_lesion.png` when present.
std::vector<ItaResult> run_batch(const std::filesystem::path& image_dir,
                                 const std::optional<std::filesystem::path>& mask_dir, Method method,
                                 ItaVariant variant, const EstimatorConfig& cfg, unsigned jobs = 1);

/// Single-image dispatch used by run_batch.
ItaResult estimate_one(const std::filesystem::path& image_path,
                       const std::optional<std::filesystem::path>& mask_dir, Method method,
                       ItaVariant variant, const EstimatorConfig& cfg);

}  // namespace skintone
