// jpeglib.h needs FILE and size_t declared first.
#include <csetjmp>
#include <cstddef>
#include <cstdio>

#include <jpeglib.h>
#include <png.h>

#include <cstring>
#include <fstream>
#include <memory>

#include "skintone/error.hpp"
#include "skintone/image.hpp"

namespace skintone {

namespace {

namespace fs = std::filesystem;

std::vector<unsigned char> read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw Error(Errc::Io, "cannot open " + path.string() + ": no such file");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::Io, "read failed for " + path.string());
  return bytes;
}

bool is_png(const std::vector<unsigned char>& bytes) {
  static constexpr unsigned char kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

bool is_jpeg(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

Image decode_png(const std::vector<unsigned char>& bytes, const fs::path& path) {
  PngImage png;
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size()))
    throw Error(Errc::Decode, path.string() + ": " + png.image.message);
  png.image.format = PNG_FORMAT_RGB;
  const int width = static_cast<int>(png.image.width);
  const int height = static_cast<int>(png.image.height);
  std::vector<RgbColor> pixels(static_cast<std::size_t>(width) * height);
  static_assert(sizeof(RgbColor) == 3);
  if (!png_image_finish_read(&png.image, nullptr, pixels.data(), 0, nullptr))
    throw Error(Errc::Decode, path.string() + ": " + png.image.message);
  if (PNG_IMAGE_FAILED(png.image))
    throw Error(Errc::Decode, path.string() + ": " + png.image.message);
  return Image(width, height, std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

[[noreturn]] void jpeg_fail(j_common_ptr info) {
  auto* err = reinterpret_cast<JpegErrorManager*>(info->err);
  (*info->err->format_message)(info, err->message);
  std::longjmp(err->jump, 1);
}

// Corrupt-data warnings (premature EOF, bad Huffman codes) are fatal here:
// a partially decoded image would silently feed grey fill into the estimators.
void jpeg_warn(j_common_ptr info, int level) {
  if (level < 0) jpeg_fail(info);
}

Image decode_jpeg(const std::vector<unsigned char>& bytes, const fs::path& path) {
  jpeg_decompress_struct info{};
  JpegErrorManager err{};
  info.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_fail;
  err.base.emit_message = jpeg_warn;

  std::vector<RgbColor> pixels;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&info);
    throw Error(Errc::Decode, path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&info);
  jpeg_mem_src(&info, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&info, TRUE);
  info.out_color_space = JCS_RGB;
  jpeg_start_decompress(&info);
  const int width = static_cast<int>(info.output_width);
  const int height = static_cast<int>(info.output_height);
  pixels.resize(static_cast<std::size_t>(width) * height);
  while (info.output_scanline < info.output_height) {
    JSAMPROW row = reinterpret_cast<JSAMPROW>(pixels.data() + static_cast<std::size_t>(info.output_scanline) * width);
    jpeg_read_scanlines(&info, &row, 1);
  }
  jpeg_finish_decompress(&info);
  jpeg_destroy_decompress(&info);
  return Image(width, height, std::move(pixels));
}

void write_png(const fs::path& path, int width, int height, png_uint_32 format, const void* data) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = format;
  if (!png_image_write_to_file(&png.image, path.c_str(), 0, data, 0, nullptr))
    throw Error(Errc::Io, "cannot write " + path.string() + ": " + png.image.message);
}

}  // namespace

Image load_image(const fs::path& path) {
  const auto bytes = read_file(path);
  if (is_png(bytes)) return decode_png(bytes, path);
  if (is_jpeg(bytes)) return decode_jpeg(bytes, path);
  throw Error(Errc::Decode, path.string() + ": not a PNG or JPEG file");
}

PixelMask load_mask(const fs::path& path) {
  const Image image = load_image(path);
  PixelMask mask(image.width(), image.height());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) mask.set(i, px[i].r != 0 || px[i].g != 0 || px[i].b != 0);
  return mask;
}

void save_png(const Image& image, const fs::path& path) {
  write_png(path, image.width(), image.height(), PNG_FORMAT_RGB, image.pixels().data());
}

void save_mask_png(const PixelMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> grey(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) grey[i] = mask[i] ? 255 : 0;
  write_png(path, mask.width(), mask.height(), PNG_FORMAT_GRAY, grey.data());
}

void save_jpeg(const Image& image, const fs::path& path, int quality) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(Errc::Io, "cannot write " + path.string());

  jpeg_compress_struct info{};
  JpegErrorManager err{};
  info.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_fail;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&info);
    throw Error(Errc::Io, "cannot encode " + path.string() + ": " + err.message);
  }
  jpeg_create_compress(&info);
  jpeg_stdio_dest(&info, file.get());
  info.image_width = static_cast<JDIMENSION>(image.width());
  info.image_height = static_cast<JDIMENSION>(image.height());
  info.input_components = 3;
  info.in_color_space = JCS_RGB;
  jpeg_set_defaults(&info);
  jpeg_set_quality(&info, quality, TRUE);
  jpeg_start_compress(&info, TRUE);
  const auto px = image.pixels();
  while (info.next_scanline < info.image_height) {
    auto* row = const_cast<JSAMPROW>(reinterpret_cast<const JSAMPLE*>(
        px.data() + static_cast<std::size_t>(info.next_scanline) * image.width()));
    jpeg_write_scanlines(&info, &row, 1);
  }
  jpeg_finish_compress(&info);
  jpeg_destroy_compress(&info);
}

}  // namespace skintone
