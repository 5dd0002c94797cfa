#include "skintone/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "skintone/config.hpp"
#include "skintone/error.hpp"
#include "skintone/tones_csv.hpp"

namespace skintone {

namespace {

constexpr int kGamutRetries = 10000;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

RgbColor require_in_gamut(const LabColor& lab, const char* what) {
  const auto rgb = cielab_to_srgb(lab);
  if (!rgb)
    throw Error(Errc::OutOfGamut, std::string(what) + " Lab (" + format_number(lab.l) + ", " +
                                      format_number(lab.a) + ", " + format_number(lab.b) +
                                      ") has no sRGB representation");
  return *rgb;
}

void stamp_disc(PixelMask& mask, double cx, double cy, double radius) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(cx + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(cy + radius)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) mask.set(x, y, true);
}

// Each stroke starts at a random point and takes a fixed number of unit steps
// while its heading drifts.
PixelMask draw_hair(const SyntheticSpec& spec, std::mt19937_64& rng) {
  PixelMask hair(spec.width, spec.height);
  const double radius = 0.5 * spec.hair_width;
  const int steps = std::max(spec.width, spec.height) / 2;
  for (int h = 0; h < spec.hair_count; ++h) {
    double x = unit(rng) * spec.width;
    double y = unit(rng) * spec.height;
    double heading = unit(rng) * 2.0 * std::numbers::pi;
    for (int s = 0; s < steps; ++s) {
      stamp_disc(hair, x, y, radius);
      heading += (unit(rng) - 0.5) * 0.3;
      x += std::cos(heading);
      y += std::sin(heading);
    }
  }
  return hair;
}

Interval parse_range(std::string_view value, std::string_view key) {
  const auto v = parse_double_list(value, key);
  if (v.size() != 2 || !(v[0] <= v[1])) throw Error(Errc::Parse, std::string(key) + ": expected lo,hi");
  return {v[0], v[1]};
}

LabColor parse_lab(std::string_view value, std::string_view key) {
  const auto v = parse_double_list(value, key);
  if (v.size() != 3) throw Error(Errc::Parse, std::string(key) + ": expected L,a,b");
  return {v[0], v[1], v[2]};
}

int parse_small_int(std::string_view value, std::string_view key) {
  const long long v = parse_integer(value, key);
  if (v < 0 || v > 1'000'000) throw Error(Errc::Parse, std::string(key) + ": out of range");
  return static_cast<int>(v);
}

}  // namespace

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidArgument, what); };
  if (width < 1 || height < 1) fail("synthetic image dimensions must be positive");
  if (!(lesion_radius_frac >= 0.0 && lesion_radius_frac < 1.0)) fail("lesion_radius_frac must be in [0,1)");
  if (hair_count < 0) fail("hair_count must be >= 0");
  if (hair_width < 1) fail("hair_width must be >= 1");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
  for (double g : channel_gains)
    if (!(g > 0.0) || !std::isfinite(g)) fail("channel gains must be positive");
}

ItaResult synthetic_ground_truth(const SyntheticSpec& spec, const SkinTypeThresholds& thresholds) {
  ItaResult r;
  r.method = Method::GroundTruth;
  r.variant = ItaVariant::Arctan2;
  r.ita_deg = ita_degrees(spec.skin_lab.l, spec.skin_lab.b, ItaVariant::Arctan2);
  r.skin_type = bin_skin_type(r.ita_deg, thresholds);
  r.status = Status::Ok;
  return r;
}

SyntheticSample generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const RgbColor skin = require_in_gamut(spec.skin_lab, "skin");

  const int w = spec.width;
  const int h = spec.height;
  PixelMask lesion(w, h);
  RgbColor lesion_rgb = skin;
  const double radius = spec.lesion_radius_frac * std::min(w, h);
  if (radius > 0.0) {
    lesion_rgb = require_in_gamut(spec.lesion_lab, "lesion");
    const double cx = 0.5 * (w - 1);
    const double cy = 0.5 * (h - 1);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) < radius * radius) lesion.set(x, y, true);
  }

  std::mt19937_64 rng(spec.seed);
  const PixelMask hair = draw_hair(spec, rng);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

  Image image(w, h);
  PixelMask skin_mask(w, h);
  auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    skin_mask.set(i, !lesion[i]);
    const RgbColor base = hair[i] ? kHairColor : (lesion[i] ? lesion_rgb : skin);
    std::array<double, 3> v{static_cast<double>(base.r), static_cast<double>(base.g),
                            static_cast<double>(base.b)};
    for (std::size_t c = 0; c < 3; ++c) {
      if (spec.noise_sigma > 0.0) v[c] += noise(rng);
      v[c] = std::clamp(std::round(v[c] * spec.channel_gains[c]), 0.0, 255.0);
    }
    px[i] = {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
  }

  ItaResult truth = synthetic_ground_truth(spec);
  truth.pixel_count = skin_mask.count();
  return {std::move(image), std::move(truth), std::move(lesion), std::move(skin_mask), hair};
}

CorpusSpec parse_corpus_spec(std::string_view text, const std::string& source) {
  CorpusSpec corpus;
  SyntheticSpec& s = corpus.base;
  for (const auto& kv : parse_key_values(text, source)) {
    const std::string_view key = kv.key;
    const std::string_view value = kv.value;
    try {
      if (key == "skin_lab") {
        s.skin_lab = parse_lab(value, key);
      } else if (key == "lesion_lab") {
        s.lesion_lab = parse_lab(value, key);
      } else if (key == "lesion_radius_frac") {
        s.lesion_radius_frac = parse_double(value, key);
      } else if (key == "hair_count") {
        s.hair_count = parse_small_int(value, key);
      } else if (key == "hair_width") {
        s.hair_width = parse_small_int(value, key);
      } else if (key == "noise_sigma") {
        s.noise_sigma = parse_double(value, key);
      } else if (key == "channel_gains") {
        const auto g = parse_double_list(value, key);
        if (g.size() != 3) throw Error(Errc::Parse, "channel_gains: expected three values");
        s.channel_gains = {g[0], g[1], g[2]};
      } else if (key == "side") {
        s.width = s.height = parse_small_int(value, key);
      } else if (key == "width") {
        s.width = parse_small_int(value, key);
      } else if (key == "height") {
        s.height = parse_small_int(value, key);
      } else if (key == "seed") {
        const long long seed = parse_integer(value, key);
        if (seed < 0) throw Error(Errc::Parse, "seed must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
      } else if (key == "count") {
        corpus.count = static_cast<std::size_t>(parse_small_int(value, key));
      } else if (key == "prefix") {
        if (value.empty() || value.find_first_of("/\\,") != std::string_view::npos)
          throw Error(Errc::Parse, "prefix must be a plain file name");
        corpus.prefix = std::string(value);
      } else if (key == "skin_l_range") {
        corpus.skin_l_range = parse_range(value, key);
      } else if (key == "skin_a_range") {
        corpus.skin_a_range = parse_range(value, key);
      } else if (key == "skin_b_range") {
        corpus.skin_b_range = parse_range(value, key);
      } else {
        throw Error(Errc::Parse, "unknown key '" + kv.key + "'");
      }
    } catch (const Error& e) {
      throw Error(Errc::Parse, source + ":" + std::to_string(kv.line) + ": " + e.detail());
    }
  }
  return corpus;
}

CorpusSpec read_corpus_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_corpus_spec(text.str(), path.string());
}

std::vector<std::pair<std::string, SyntheticSpec>> expand_corpus(const CorpusSpec& corpus) {
  corpus.base.validate();
  std::vector<std::pair<std::string, SyntheticSpec>> out;
  out.reserve(corpus.count);
  const bool jitter = corpus.skin_l_range || corpus.skin_a_range || corpus.skin_b_range;
  for (std::size_t i = 0; i < corpus.count; ++i) {
    SyntheticSpec spec = corpus.base;
    spec.seed = corpus.base.seed + i;
    if (jitter) {
      // A separate stream so the skin draw does not shift the hair and noise.
      std::mt19937_64 rng(spec.seed ^ 0xD1B54A32D192ED03ULL);
      auto draw = [&](const std::optional<Interval>& r, double fallback) {
        return r ? r->lo + unit(rng) * (r->hi - r->lo) : fallback;
      };
      int tries = 0;
      do {
        if (++tries > kGamutRetries) throw Error(Errc::OutOfGamut, "skin Lab ranges contain no sRGB colour");
        spec.skin_lab = {draw(corpus.skin_l_range, corpus.base.skin_lab.l),
                         draw(corpus.skin_a_range, corpus.base.skin_lab.a),
                         draw(corpus.skin_b_range, corpus.base.skin_lab.b)};
      } while (!cielab_to_srgb(spec.skin_lab));
    }
    char id[64];
    std::snprintf(id, sizeof id, "_%04zu", i);
    out.emplace_back(corpus.prefix + id, spec);
  }
  return out;
}

std::vector<ItaResult> write_synthetic_corpus(const std::filesystem::path& out_dir, const CorpusSpec& corpus) {
  const auto items = expand_corpus(corpus);
  const auto images = out_dir / "images";
  const auto masks = out_dir / "masks";
  std::error_code ec;
  std::filesystem::create_directories(images, ec);
  std::filesystem::create_directories(masks, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ItaResult> truths;
  truths.reserve(items.size());
  for (const auto& [id, spec] : items) {
    SyntheticSample sample = generate_synthetic(spec);
    save_png(sample.image, images / (id + ".png"));
    save_mask_png(sample.skin_mask, masks / (id + "_mask.png"));
    save_mask_png(sample.lesion_mask, masks / (id + "_lesion.png"));
    sample.ground_truth.image_id = id;
    truths.push_back(std::move(sample.ground_truth));
  }
  write_tones_csv(out_dir / "ground_truth.csv", truths);
  return truths;
}

}  // namespace skintone
