#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skintone/analysis.hpp"

namespace skintone {

enum class Subset { Train, Val, Test };
enum class SplitMode { Baseline, DataShift };

std::string_view to_string(Subset subset) noexcept;
std::string_view to_string(SplitMode mode) noexcept;

struct LabelledId {
  std::string image_id;
  Lesion label = Lesion::NV;
};

struct SplitRatios {
  double train = 0.57;
  double val = 0.14;
  double test = 0.29;
};

struct SplitAssignment {
  std::map<std::string, Subset> subsets;  // ordered by image_id
  std::uint64_t seed = 0;
  SplitMode mode = SplitMode::Baseline;
  std::size_t unassigned = 0;  // records dropped for lack of an Ok tone (data shift)

  std::size_t count(Subset s) const noexcept;
  /// Per-class subset counts, indexed [lesion][subset].
  std::array<std::array<std::size_t, 3>, kLesionCount> per_class(std::span<const LabelledId> records) const;
};

/// Largest-remainder apportionment of `total` by `weights` (normalised).
/// Remainder ties go to the lower index of `priority` order.
std::vector<std::size_t> largest_remainder(std::size_t total, std::span<const double> weights,
                                           std::span<const std::size_t> priority);

/// Seeded Fisher-Yates shuffle; identical on every platform for a given seed.
void seeded_shuffle(std::vector<std::string>& items, std::uint64_t seed_state);

/// Per lesion class: sort ids, shuffle with the seeded generator, allot
/// subset sizes by largest remainder (tie priority Train > Test > Val).
/// With `test_size`, the test set has exactly that many ids (apportioned over
/// classes by size) and the rest is split train:val in the given proportion.
/// Throws Error(InvalidRatios) unless ratios are positive and sum to 1.
SplitAssignment stratified_split(std::span<const LabelledId> records, const SplitRatios& ratios,
                                 std::uint64_t seed, std::optional<std::size_t> test_size = std::nullopt);

/// Images with ITA > cutoff form the Train/Val pool (split train_fraction :
/// rest, stratified by lesion); images with ITA <= cutoff form Test. Records
/// without an Ok tone are left unassigned. Throws Error(EmptyTestSet) or
/// Error(EmptyTrainSet) when a side is empty.
SplitAssignment datashift_split(std::span<const ItaResult> tones, std::span<const LabelledId> records,
                                std::uint64_t seed, double cutoff = 41.0, double train_fraction = 0.8);

/// `# seed=<seed> mode=<mode>` followed by `image_id,subset` rows.
void write_splits_csv(std::ostream& out, const SplitAssignment& split);
void write_splits_csv(const std::filesystem::path& path, const SplitAssignment& split);

/// Records from a CSV with `image_id` and a `label` or `true_label` column.
std::vector<LabelledId> read_labels_csv(const std::filesystem::path& path);

}  // namespace skintone
