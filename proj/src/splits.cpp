#include "skintone/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "skintone/config.hpp"
#include "skintone/csv.hpp"
#include "skintone/error.hpp"

namespace skintone {

namespace {

constexpr std::array<std::size_t, 3> kTrainTestVal{0, 2, 1};

// Unbiased draw in [0, bound) by rejection; std::uniform_int_distribution is
// implementation-defined and would make splits differ between toolchains.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void validate(const SplitRatios& r) {
  if (!(r.train > 0.0 && r.val > 0.0 && r.test > 0.0))
    throw Error(Errc::InvalidRatios, "split ratios must be positive");
  if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9)
    throw Error(Errc::InvalidRatios, "split ratios must sum to 1");
}

std::array<std::vector<std::string>, kLesionCount> group_by_class(std::span<const LabelledId> records) {
  std::array<std::vector<std::string>, kLesionCount> groups;
  for (const auto& r : records) groups[index_of(r.label)].push_back(r.image_id);
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  return groups;
}

void assign(SplitAssignment& out, const std::vector<std::string>& ids, std::size_t begin, std::size_t end,
            Subset subset) {
  for (std::size_t i = begin; i < end; ++i) out.subsets[ids[i]] = subset;
}

}  // namespace

std::string_view to_string(Subset subset) noexcept {
  switch (subset) {
    case Subset::Train: return "train";
    case Subset::Val: return "val";
    case Subset::Test: return "test";
  }
  return "?";
}

std::string_view to_string(SplitMode mode) noexcept {
  return mode == SplitMode::Baseline ? "baseline" : "datashift";
}

std::size_t SplitAssignment::count(Subset s) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(subsets.begin(), subsets.end(), [s](const auto& kv) { return kv.second == s; }));
}

std::array<std::array<std::size_t, 3>, kLesionCount> SplitAssignment::per_class(
    std::span<const LabelledId> records) const {
  std::array<std::array<std::size_t, 3>, kLesionCount> out{};
  for (const auto& r : records) {
    const auto it = subsets.find(r.image_id);
    if (it != subsets.end()) ++out[index_of(r.label)][static_cast<std::size_t>(it->second)];
  }
  return out;
}

std::vector<std::size_t> largest_remainder(std::size_t total, std::span<const double> weights,
                                           std::span<const std::size_t> priority) {
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size());
  std::vector<double> remainder(weights.size());
  std::size_t allotted = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / weight_sum;
    // The epsilon keeps quotas like 100 * 0.57 = 56.99999999999999 exact.
    const double whole = std::floor(quota + 1e-9);
    out[i] = static_cast<std::size_t>(whole);
    remainder[i] = std::max(0.0, quota - whole);
    allotted += out[i];
  }
  std::vector<std::size_t> order(priority.begin(), priority.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b] + 1e-12; });
  for (std::size_t k = 0; allotted < total && k < order.size(); ++k, ++allotted) ++out[order[k]];
  return out;
}

void seeded_shuffle(std::vector<std::string>& items, std::uint64_t seed_state) {
  std::mt19937_64 rng(seed_state);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

SplitAssignment stratified_split(std::span<const LabelledId> records, const SplitRatios& ratios,
                                 std::uint64_t seed, std::optional<std::size_t> test_size) {
  validate(ratios);
  SplitAssignment out;
  out.seed = seed;
  out.mode = SplitMode::Baseline;
  auto groups = group_by_class(records);

  std::array<std::size_t, kLesionCount> test_quota{};
  if (test_size) {
    std::size_t total = 0;
    std::array<double, kLesionCount> sizes{};
    for (std::size_t c = 0; c < kLesionCount; ++c) {
      sizes[c] = static_cast<double>(groups[c].size());
      total += groups[c].size();
    }
    if (*test_size > total) throw Error(Errc::InvalidArgument, "test size exceeds number of records");
    std::array<std::size_t, kLesionCount> order{};
    std::iota(order.begin(), order.end(), 0);
    const auto q = largest_remainder(*test_size, sizes, order);
    std::copy(q.begin(), q.end(), test_quota.begin());
  }

  for (std::size_t c = 0; c < kLesionCount; ++c) {
    auto& ids = groups[c];
    if (ids.empty()) continue;
    seeded_shuffle(ids, seed ^ (0x9E3779B97F4A7C15ULL * (c + 1)));

    std::size_t n_train, n_val, n_test;
    if (test_size) {
      n_test = test_quota[c];
      const std::array<double, 2> w{ratios.train, ratios.val};
      const std::array<std::size_t, 2> prio{0, 1};
      const auto q = largest_remainder(ids.size() - n_test, w, prio);
      n_train = q[0];
      n_val = q[1];
    } else {
      const std::array<double, 3> w{ratios.train, ratios.val, ratios.test};
      const auto q = largest_remainder(ids.size(), w, kTrainTestVal);
      n_train = q[0];
      n_val = q[1];
      n_test = q[2];
    }
    assign(out, ids, 0, n_train, Subset::Train);
    assign(out, ids, n_train, n_train + n_val, Subset::Val);
    assign(out, ids, n_train + n_val, n_train + n_val + n_test, Subset::Test);
  }
  return out;
}

SplitAssignment datashift_split(std::span<const ItaResult> tones, std::span<const LabelledId> records,
                                std::uint64_t seed, double cutoff, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(Errc::InvalidRatios, "train fraction must be in (0,1)");
  std::unordered_map<std::string, double> ita;
  for (const auto& t : tones)
    if (t.ok()) ita.emplace(t.image_id, t.ita_deg);

  SplitAssignment out;
  out.seed = seed;
  out.mode = SplitMode::DataShift;
  std::vector<LabelledId> light;
  std::vector<std::string> dark;
  for (const auto& r : records) {
    const auto it = ita.find(r.image_id);
    if (it == ita.end()) {
      ++out.unassigned;
      continue;
    }
    if (it->second > cutoff)
      light.push_back(r);
    else
      dark.push_back(r.image_id);
  }
  if (dark.empty()) throw Error(Errc::EmptyTestSet, "no image with ITA <= " + format_number(cutoff));
  if (light.empty()) throw Error(Errc::EmptyTrainSet, "no image with ITA > " + format_number(cutoff));

  for (const auto& id : dark) out.subsets[id] = Subset::Test;
  auto groups = group_by_class(light);
  for (std::size_t c = 0; c < kLesionCount; ++c) {
    auto& ids = groups[c];
    if (ids.empty()) continue;
    seeded_shuffle(ids, seed ^ (0x9E3779B97F4A7C15ULL * (c + 1)));
    const std::array<double, 2> w{train_fraction, 1.0 - train_fraction};
    const std::array<std::size_t, 2> prio{0, 1};
    const auto q = largest_remainder(ids.size(), w, prio);
    assign(out, ids, 0, q[0], Subset::Train);
    assign(out, ids, q[0], ids.size(), Subset::Val);
  }
  return out;
}

void write_splits_csv(std::ostream& out, const SplitAssignment& split) {
  out << "# seed=" << split.seed << " mode=" << to_string(split.mode) << '\n';
  out << "image_id,subset\n";
  for (const auto& [id, subset] : split.subsets) out << id << ',' << to_string(subset) << '\n';
}

void write_splits_csv(const std::filesystem::path& path, const SplitAssignment& split) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  write_splits_csv(out, split);
}

std::vector<LabelledId> read_labels_csv(const std::filesystem::path& path) {
  const CsvTable table = CsvTable::read(path);
  const auto c_id = table.column("image_id");
  auto c_label = table.find_column("label");
  if (!c_label) c_label = table.find_column("true_label");
  if (!c_label) throw Error(Errc::Parse, path.string() + ": needs a 'label' or 'true_label' column");
  std::vector<LabelledId> out;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto& row = table.row(i);
    const auto label = parse_lesion(row[*c_label]);
    if (!label) table.fail(i, "unknown lesion label '" + row[*c_label] + "'");
    out.push_back({row[c_id], *label});
  }
  return out;
}

}  // namespace skintone
