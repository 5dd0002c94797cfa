#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skintone/estimators.hpp"

namespace skintone {

/// The seven ISIC18 lesion classes.
enum class Lesion { MEL, NV, BCC, AKIEC, BKL, DF, VASC };
inline constexpr std::size_t kLesionCount = 7;
inline constexpr std::array<Lesion, kLesionCount> kAllLesions{
    Lesion::MEL, Lesion::NV, Lesion::BCC, Lesion::AKIEC, Lesion::BKL, Lesion::DF, Lesion::VASC};

std::string_view to_string(Lesion lesion) noexcept;
std::optional<Lesion> parse_lesion(std::string_view text) noexcept;
constexpr std::size_t index_of(Lesion l) noexcept { return static_cast<std::size_t>(l); }

struct PredictionRecord {
  std::string image_id;
  Lesion true_label = Lesion::NV;
  Lesion pred_label = Lesion::NV;
};

/// Predictions CSV with header `image_id,true_label,pred_label`.
std::vector<PredictionRecord> read_predictions_csv(const std::filesystem::path& path);

struct TypeDistribution {
  std::array<std::size_t, kSkinTypeCount> counts{};
  std::array<double, kSkinTypeCount> percent{};
  std::size_t included = 0;  // rows with status Ok
  std::size_t excluded = 0;
};

TypeDistribution type_distribution(std::span<const ItaResult> results);

/// Joint skin-type counts of two estimators. Row = type by A, column = type by B.
struct AgreementMatrix {
  std::array<std::array<std::size_t, kSkinTypeCount>, kSkinTypeCount> cells{};
  std::vector<std::string> joint_dark_ids;  // sorted
  std::size_t joined = 0;                   // images Ok in both inputs
  std::size_t excluded = 0;                 // images missing or non-Ok on either side
  double dark_cutoff = 28.0;

  std::size_t total() const noexcept;
  std::size_t diagonal() const noexcept;
  bool is_diagonal() const noexcept { return diagonal() == total(); }
};

/// Joins on image_id. Ids with both ITAs <= dark_cutoff form the joint-dark list.
AgreementMatrix agreement_matrix(std::span<const ItaResult> a, std::span<const ItaResult> b,
                                 double dark_cutoff = 28.0);

struct MetricsReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;
  std::array<std::optional<double>, kLesionCount> recall{};  // empty for classes without support
  std::array<double, kLesionCount> precision{};
  std::array<std::size_t, kLesionCount> support{};
  std::array<std::size_t, kLesionCount> predicted{};
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  /// Supported classes that were never predicted; their precision counts as 0.
  std::size_t undefined_precision = 0;
};

/// Balanced accuracy is the unweighted mean recall over classes present in the
/// truth; weighted metrics weight each class by its truth support.
/// Throws Error(EmptyInput) for an empty list.
MetricsReport classification_metrics(std::span<const PredictionRecord> predictions);

struct GroupReport {
  SkinType type;
  std::size_t size = 0;
  MetricsReport metrics;
};

/// Per-skin-type metrics over predictions joined with Ok tone rows; empty
/// groups are omitted. Throws Error(NoOverlap) when the join is empty.
std::vector<GroupReport> fairness_by_type(std::span<const PredictionRecord> predictions,
                                          std::span<const ItaResult> tones);

}  // namespace skintone
