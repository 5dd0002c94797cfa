#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "skintone/colorspace.hpp"

namespace skintone {

/// 8-bit sRGB image, row-major.
class Image {
 public:
  Image(int width, int height, RgbColor fill = {});
  Image(int width, int height, std::vector<RgbColor> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  RgbColor& at(int x, int y) { return pixels_[index(x, y)]; }
  const RgbColor& at(int x, int y) const { return pixels_[index(x, y)]; }

  std::span<RgbColor> pixels() noexcept { return pixels_; }
  std::span<const RgbColor> pixels() const noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<RgbColor> pixels_;
};

/// Boolean mask aligned with an Image.
class PixelMask {
 public:
  PixelMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }

  std::size_t size() const noexcept { return bits_.size(); }
  std::size_t count() const noexcept;
  bool matches(const Image& image) const noexcept {
    return image.width() == width_ && image.height() == height_;
  }

  friend bool operator==(const PixelMask&, const PixelMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

/// Single-channel 8-bit image used for luma and morphology.
struct GreyImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;
};

GreyImage to_grey(const Image& image);

inline constexpr int kMinStandardSide = 40;

/// Centre-crop to the largest centred square (offsets floored) and resize
/// bilinearly to side x side. Throws Error(InvalidSide) when side < 40.
Image standardize_geometry(const Image& image, int side);

/// Same crop as standardize_geometry, nearest-neighbour resize.
PixelMask standardize_geometry(const PixelMask& mask, int side);

/// Scales every channel by (mean of channel means) / (channel mean) and clamps
/// to [0, 255]. Throws Error(ZeroChannel) when a channel mean is zero.
Image grey_world_balance(const Image& image);

/// Per-channel gains a grey-world balance would apply.
std::array<double, 3> grey_world_gains(const Image& image);

/// Morphological black-hat (closing minus original) of the luma channel with
/// a square structuring element. Pixels whose response exceeds
/// `intensity_threshold` are set. Throws Error(InvalidKernel) for even or
/// sub-3 kernels.
PixelMask blackhat_hair_mask(const Image& image, int kernel_side, int intensity_threshold);

// File I/O. PNG and JPEG are detected by signature, not extension.
Image load_image(const std::filesystem::path& path);

/// Reads a mask PNG; any non-zero channel marks the pixel true.
PixelMask load_mask(const std::filesystem::path& path);

void save_png(const Image& image, const std::filesystem::path& path);
void save_mask_png(const PixelMask& mask, const std::filesystem::path& path);
void save_jpeg(const Image& image, const std::filesystem::path& path, int quality = 95);

}  // namespace skintone
