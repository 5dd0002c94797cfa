#include "skintone/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

#include "skintone/error.hpp"

namespace skintone {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string image_id_of(const fs::path& image_path) { return image_path.stem().string(); }

fs::path mask_path_for(const fs::path& mask_dir, std::string_view image_id) {
  return mask_dir / (std::string(image_id) + "_mask.png");
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(Errc::Io, "not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot list " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file(ec)) continue;
    const std::string ext = lower(entry.path().extension().string());
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    const std::string stem = entry.path().stem().string();
    if (ends_with(stem, "_mask") || ends_with(stem, "_lesion")) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    const auto ia = image_id_of(a), ib = image_id_of(b);
    return ia != ib ? ia < ib : a.filename() < b.filename();
  });
  return files;
}

ItaResult estimate_one(const fs::path& image_path, const std::optional<fs::path>& mask_dir,
                       Method method, ItaVariant variant, const EstimatorConfig& cfg) {
  const Image image = load_image(image_path);
  switch (method) {
    case Method::Dlhss: {
      if (!mask_dir) throw Error(Errc::MissingMaskDir, "Dlhss requires a mask directory");
      const PixelMask mask = load_mask(mask_path_for(*mask_dir, image_id_of(image_path)));
      return estimate_dlhss(image, mask, cfg);
    }
    case Method::ColorSeg: return estimate_colorseg(image, cfg);
    case Method::RandomPatch: {
      // A lesion mask next to the skin masks enables the LesionDominated check.
      if (mask_dir) {
        const fs::path lesion_path = *mask_dir / (image_id_of(image_path) + "_lesion.png");
        if (fs::is_regular_file(lesion_path)) {
          const PixelMask lesion = load_mask(lesion_path);
          return estimate_random_patch(image, variant, cfg, &lesion);
        }
      }
      return estimate_random_patch(image, variant, cfg);
    }
    case Method::Ght: return estimate_ght(image, cfg);
    case Method::GroundTruth: break;
  }
  throw Error(Errc::InvalidArgument, "method cannot be run as an estimator");
}

std::vector<ItaResult> run_batch(const fs::path& image_dir, const std::optional<fs::path>& mask_dir,
                                 Method method, ItaVariant variant, const EstimatorConfig& cfg,
                                 unsigned jobs) {
  if (method == Method::Dlhss && !mask_dir)
    throw Error(Errc::MissingMaskDir, "Dlhss requires a mask directory");
  if (method == Method::GroundTruth) throw Error(Errc::InvalidArgument, "GroundTruth is not an estimator");
  cfg.validate();
  if (mask_dir) {
    std::error_code ec;
    if (!fs::is_directory(*mask_dir, ec))
      throw Error(Errc::Io, "not a readable directory: " + mask_dir->string());
  }
  const auto files = list_images(image_dir);
  const ItaVariant effective = method == Method::RandomPatch ? variant : ItaVariant::Arctan2;

  std::vector<ItaResult> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      ItaResult r;
      try {
        r = estimate_one(files[i], mask_dir, method, effective, cfg);
      } catch (const std::exception& e) {
        r = ItaResult{};
        r.method = method;
        r.variant = effective;
        r.status = Status::Error;
        r.message = e.what();
      }
      r.image_id = image_id_of(files[i]);
      results[i] = std::move(r);
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace skintone
