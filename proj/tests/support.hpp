#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "skintone/image.hpp"

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("skintone_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Two rounded Gaussian modes, 500-5000 samples each, clipped to [0, 255].
template <class Rng>
std::array<std::uint64_t, 256> random_bimodal(Rng& rng) {
  std::uniform_real_distribution<double> mean(20, 235), sigma(3, 25);
  std::uniform_int_distribution<int> count(500, 5000);
  std::array<std::uint64_t, 256> h{};
  for (int mode = 0; mode < 2; ++mode) {
    std::normal_distribution<double> g(mean(rng), sigma(rng));
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const long v = std::lround(g(rng));
      ++h[static_cast<std::size_t>(std::clamp(v, 0L, 255L))];
    }
  }
  return h;
}

inline skintone::Image uniform(int w, int h, skintone::RgbColor c) { return skintone::Image(w, h, c); }

/// Dark disc of radius r centred in the image.
inline void paint_disc(skintone::Image& img, double r, skintone::RgbColor c) {
  const double cx = 0.5 * (img.width() - 1), cy = 0.5 * (img.height() - 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r) img.at(x, y) = c;
}

}  // namespace testing
