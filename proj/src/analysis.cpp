#include "skintone/analysis.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "skintone/csv.hpp"
#include "skintone/error.hpp"

namespace skintone {

namespace {

std::unordered_map<std::string, const ItaResult*> index_ok(std::span<const ItaResult> rows) {
  std::unordered_map<std::string, const ItaResult*> out;
  for (const auto& r : rows)
    if (r.ok() && r.skin_type) out.emplace(r.image_id, &r);
  return out;
}

}  // namespace

std::string_view to_string(Lesion lesion) noexcept {
  switch (lesion) {
    case Lesion::MEL: return "MEL";
    case Lesion::NV: return "NV";
    case Lesion::BCC: return "BCC";
    case Lesion::AKIEC: return "AKIEC";
    case Lesion::BKL: return "BKL";
    case Lesion::DF: return "DF";
    case Lesion::VASC: return "VASC";
  }
  return "?";
}

std::optional<Lesion> parse_lesion(std::string_view text) noexcept {
  for (auto l : kAllLesions)
    if (to_string(l) == text) return l;
  return std::nullopt;
}

std::vector<PredictionRecord> read_predictions_csv(const std::filesystem::path& path) {
  const CsvTable table = CsvTable::read(path);
  const auto c_id = table.column("image_id");
  const auto c_true = table.column("true_label");
  const auto c_pred = table.column("pred_label");
  std::vector<PredictionRecord> out;
  out.reserve(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto& row = table.row(i);
    const auto truth = parse_lesion(row[c_true]);
    if (!truth) table.fail(i, "unknown true_label '" + row[c_true] + "'");
    const auto pred = parse_lesion(row[c_pred]);
    if (!pred) table.fail(i, "unknown pred_label '" + row[c_pred] + "'");
    if (row[c_id].empty()) table.fail(i, "empty image_id");
    out.push_back({row[c_id], *truth, *pred});
  }
  return out;
}

TypeDistribution type_distribution(std::span<const ItaResult> results) {
  TypeDistribution d;
  for (const auto& r : results) {
    if (r.ok() && r.skin_type) {
      ++d.counts[r.skin_type->index()];
      ++d.included;
    } else {
      ++d.excluded;
    }
  }
  if (d.included > 0)
    for (std::size_t i = 0; i < d.counts.size(); ++i)
      d.percent[i] = 100.0 * static_cast<double>(d.counts[i]) / static_cast<double>(d.included);
  return d;
}

std::size_t AgreementMatrix::total() const noexcept {
  std::size_t t = 0;
  for (const auto& row : cells)
    for (auto c : row) t += c;
  return t;
}

std::size_t AgreementMatrix::diagonal() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) t += cells[i][i];
  return t;
}

AgreementMatrix agreement_matrix(std::span<const ItaResult> a, std::span<const ItaResult> b,
                                 double dark_cutoff) {
  AgreementMatrix m;
  m.dark_cutoff = dark_cutoff;
  const auto ok_b = index_ok(b);

  std::map<std::string, bool> seen;  // id -> counted as joined
  for (const auto& ra : a) {
    auto [it, inserted] = seen.emplace(ra.image_id, false);
    if (!inserted) continue;
    const auto jb = ok_b.find(ra.image_id);
    if (!(ra.ok() && ra.skin_type) || jb == ok_b.end()) continue;
    const ItaResult& rb = *jb->second;
    ++m.cells[ra.skin_type->index()][rb.skin_type->index()];
    ++m.joined;
    it->second = true;
    if (ra.ita_deg <= dark_cutoff && rb.ita_deg <= dark_cutoff) m.joint_dark_ids.push_back(ra.image_id);
  }
  for (const auto& rb : b) seen.emplace(rb.image_id, false);
  for (const auto& [id, joined] : seen) m.excluded += joined ? 0 : 1;
  std::sort(m.joint_dark_ids.begin(), m.joint_dark_ids.end());
  return m;
}

MetricsReport classification_metrics(std::span<const PredictionRecord> predictions) {
  if (predictions.empty()) throw Error(Errc::EmptyInput, "no predictions to evaluate");
  MetricsReport r;
  r.n = predictions.size();
  std::array<std::size_t, kLesionCount> hits{};
  for (const auto& p : predictions) {
    ++r.support[index_of(p.true_label)];
    ++r.predicted[index_of(p.pred_label)];
    if (p.true_label == p.pred_label) ++hits[index_of(p.true_label)];
  }

  const double n = static_cast<double>(r.n);
  std::size_t correct = 0;
  double recall_sum = 0.0;
  std::size_t classes_present = 0;
  for (std::size_t c = 0; c < kLesionCount; ++c) {
    correct += hits[c];
    r.precision[c] = r.predicted[c] > 0 ? static_cast<double>(hits[c]) / static_cast<double>(r.predicted[c]) : 0.0;
    if (r.support[c] == 0) continue;
    const double recall = static_cast<double>(hits[c]) / static_cast<double>(r.support[c]);
    r.recall[c] = recall;
    recall_sum += recall;
    ++classes_present;
    if (r.predicted[c] == 0) ++r.undefined_precision;

    const double weight = static_cast<double>(r.support[c]) / n;
    const double p = r.precision[c];
    const double f1 = p + recall > 0.0 ? 2.0 * p * recall / (p + recall) : 0.0;
    r.weighted_precision += weight * p;
    r.weighted_recall += weight * recall;
    r.weighted_f1 += weight * f1;
  }
  r.accuracy = static_cast<double>(correct) / n;
  r.balanced_accuracy = recall_sum / static_cast<double>(classes_present);
  return r;
}

std::vector<GroupReport> fairness_by_type(std::span<const PredictionRecord> predictions,
                                          std::span<const ItaResult> tones) {
  const auto ok = index_ok(tones);
  std::array<std::vector<PredictionRecord>, kSkinTypeCount> groups;
  std::size_t joined = 0;
  for (const auto& p : predictions) {
    const auto it = ok.find(p.image_id);
    if (it == ok.end()) continue;
    groups[it->second->skin_type->index()].push_back(p);
    ++joined;
  }
  if (joined == 0) throw Error(Errc::NoOverlap, "no prediction joins an Ok tone row on image_id");

  std::vector<GroupReport> out;
  for (int t = 0; t < kSkinTypeCount; ++t) {
    if (groups[t].empty()) continue;
    out.push_back({SkinType(t + 1), groups[t].size(), classification_metrics(groups[t])});
  }
  return out;
}

}  // namespace skintone
