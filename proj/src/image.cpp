#include "skintone/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skintone/error.hpp"

namespace skintone {

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1)
    throw Error(Errc::InvalidArgument,
                "image dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
}

struct SquareCrop {
  int x0;
  int y0;
  int extent;
};

SquareCrop centred_square(int width, int height) {
  const int extent = std::min(width, height);
  return {(width - extent) / 2, (height - extent) / 2, extent};
}

// Sliding max/min along rows then columns; out-of-image samples are ignored.
template <typename Pick>
std::vector<std::uint8_t> separable_filter(const std::vector<std::uint8_t>& src, int width,
                                           int height, int radius, Pick pick) {
  std::vector<std::uint8_t> rows(src.size());
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* line = src.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      const int lo = std::max(0, x - radius);
      const int hi = std::min(width - 1, x + radius);
      std::uint8_t v = line[lo];
      for (int k = lo + 1; k <= hi; ++k) v = pick(v, line[k]);
      rows[static_cast<std::size_t>(y) * width + x] = v;
    }
  }
  std::vector<std::uint8_t> out(src.size());
  for (int y = 0; y < height; ++y) {
    const int lo = std::max(0, y - radius);
    const int hi = std::min(height - 1, y + radius);
    for (int x = 0; x < width; ++x) {
      std::uint8_t v = rows[static_cast<std::size_t>(lo) * width + x];
      for (int k = lo + 1; k <= hi; ++k) v = pick(v, rows[static_cast<std::size_t>(k) * width + x]);
      out[static_cast<std::size_t>(y) * width + x] = v;
    }
  }
  return out;
}

}  // namespace

Image::Image(int width, int height, RgbColor fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Image::Image(int width, int height, std::vector<RgbColor> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error(Errc::InvalidArgument, "pixel buffer does not match image dimensions");
}

PixelMask::PixelMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t PixelMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

GreyImage to_grey(const Image& image) {
  GreyImage grey{image.width(), image.height(), {}};
  grey.values.reserve(image.size());
  for (const auto& p : image.pixels()) grey.values.push_back(luma(p));
  return grey;
}

Image standardize_geometry(const Image& image, int side) {
  if (side < kMinStandardSide)
    throw Error(Errc::InvalidSide, "standardization side must be >= " +
                                       std::to_string(kMinStandardSide) + ", got " +
                                       std::to_string(side));
  const SquareCrop crop = centred_square(image.width(), image.height());
  const double scale = static_cast<double>(crop.extent) / side;

  // Pixel-centre alignment: destination centre (i + 0.5) maps to source
  // coordinate (i + 0.5) * scale - 0.5. At scale 1 this is the identity.
  std::vector<int> idx0(side), idx1(side);
  std::vector<double> frac(side);
  for (int i = 0; i < side; ++i) {
    double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(crop.extent - 1));
    const int i0 = static_cast<int>(std::floor(src));
    idx0[i] = i0;
    idx1[i] = std::min(i0 + 1, crop.extent - 1);
    frac[i] = src - i0;
  }

  Image out(side, side);
  for (int y = 0; y < side; ++y) {
    const int sy0 = crop.y0 + idx0[y];
    const int sy1 = crop.y0 + idx1[y];
    const double fy = frac[y];
    for (int x = 0; x < side; ++x) {
      const int sx0 = crop.x0 + idx0[x];
      const int sx1 = crop.x0 + idx1[x];
      const double fx = frac[x];
      const RgbColor& p00 = image.at(sx0, sy0);
      const RgbColor& p10 = image.at(sx1, sy0);
      const RgbColor& p01 = image.at(sx0, sy1);
      const RgbColor& p11 = image.at(sx1, sy1);
      auto blend = [&](std::uint8_t RgbColor::*ch) {
        const double top = p00.*ch + fx * (p10.*ch - p00.*ch);
        const double bottom = p01.*ch + fx * (p11.*ch - p01.*ch);
        const double v = top + fy * (bottom - top);
        return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      };
      out.at(x, y) = {blend(&RgbColor::r), blend(&RgbColor::g), blend(&RgbColor::b)};
    }
  }
  return out;
}

PixelMask standardize_geometry(const PixelMask& mask, int side) {
  if (side < kMinStandardSide)
    throw Error(Errc::InvalidSide, "standardization side must be >= " +
                                       std::to_string(kMinStandardSide));
  const SquareCrop crop = centred_square(mask.width(), mask.height());
  const double scale = static_cast<double>(crop.extent) / side;
  PixelMask out(side, side);
  for (int y = 0; y < side; ++y) {
    const int sy = std::min(crop.extent - 1, static_cast<int>((y + 0.5) * scale));
    for (int x = 0; x < side; ++x) {
      const int sx = std::min(crop.extent - 1, static_cast<int>((x + 0.5) * scale));
      out.set(x, y, mask.at(crop.x0 + sx, crop.y0 + sy));
    }
  }
  return out;
}

std::array<double, 3> grey_world_gains(const Image& image) {
  std::array<std::uint64_t, 3> sums{};
  for (const auto& p : image.pixels()) {
    sums[0] += p.r;
    sums[1] += p.g;
    sums[2] += p.b;
  }
  const double n = static_cast<double>(image.size());
  const std::array<double, 3> means{sums[0] / n, sums[1] / n, sums[2] / n};
  for (double m : means)
    if (m == 0.0) throw Error(Errc::ZeroChannel, "grey-world balance needs non-zero channel means");
  const double grey = (means[0] + means[1] + means[2]) / 3.0;
  return {grey / means[0], grey / means[1], grey / means[2]};
}

Image grey_world_balance(const Image& image) {
  const auto gains = grey_world_gains(image);
  std::array<std::array<std::uint8_t, 256>, 3> lut{};
  for (int c = 0; c < 3; ++c)
    for (int v = 0; v < 256; ++v)
      lut[c][v] = static_cast<std::uint8_t>(std::clamp(std::lround(v * gains[c]), 0L, 255L));

  Image out = image;
  for (auto& p : out.pixels()) p = {lut[0][p.r], lut[1][p.g], lut[2][p.b]};
  return out;
}

PixelMask blackhat_hair_mask(const Image& image, int kernel_side, int intensity_threshold) {
  if (kernel_side < 3 || kernel_side % 2 == 0)
    throw Error(Errc::InvalidKernel,
                "black-hat kernel side must be odd and >= 3, got " + std::to_string(kernel_side));
  const GreyImage grey = to_grey(image);
  const int radius = kernel_side / 2;
  auto max_pick = [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); };
  auto min_pick = [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); };
  const auto dilated = separable_filter(grey.values, grey.width, grey.height, radius, max_pick);
  const auto closed = separable_filter(dilated, grey.width, grey.height, radius, min_pick);

  PixelMask mask(image.width(), image.height());
  for (std::size_t i = 0; i < grey.values.size(); ++i) {
    const int response = static_cast<int>(closed[i]) - static_cast<int>(grey.values[i]);
    mask.set(i, response > intensity_threshold);
  }
  return mask;
}

}  // namespace skintone
