#include <doctest.h>

#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "skintone/batch.hpp"
#include "skintone/config.hpp"
#include "skintone/error.hpp"
#include "skintone/estimators.hpp"
#include "skintone/tones_csv.hpp"
#include "support.hpp"

using namespace skintone;
using testing::TempDir;

namespace {

RgbColor rgb_of(LabColor lab) {
  const auto c = cielab_to_srgb(lab);
  REQUIRE(c.has_value());
  return *c;
}

// ITA of an 8-bit colour through the reference conversion.
double oracle_ita(RgbColor c) {
  const auto lab = oracle::srgb_to_lab(c.r, c.g, c.b);
  return oracle::ita_quadrant(lab.l, lab.b);
}

double oracle_ita_arctan(RgbColor c) {
  const auto lab = oracle::srgb_to_lab(c.r, c.g, c.b);
  return oracle::ita_arctan(lab.l, lab.b);
}

Image skin_with_lesion(RgbColor skin, RgbColor lesion, int w = 600, int h = 450, double frac = 0.2) {
  Image img(w, h, skin);
  testing::paint_disc(img, frac * std::min(w, h), lesion);
  return img;
}

void require_consistent(const ItaResult& r, const EstimatorConfig& cfg = {}) {
  if (r.ok()) {
    REQUIRE(r.skin_type.has_value());
    REQUIRE(r.skin_type->value() == bin_skin_type(r.ita_deg, cfg.thresholds).value());
    REQUIRE(r.pixel_count >= 1);
  }
}

const RgbColor kDark{70, 45, 35};

}  // namespace

TEST_CASE("DLHSS on a uniform (65,10,15) region") {
  const RgbColor skin = rgb_of({65, 10, 15});
  const Image img(80, 60, skin);
  const ItaResult r = estimate_dlhss(img, PixelMask(80, 60, true), {});
  CHECK(r.ok());
  CHECK(r.method == Method::Dlhss);
  CHECK(r.variant == ItaVariant::Arctan2);
  CHECK(r.ita_deg == doctest::Approx(oracle_ita(skin)).epsilon(1e-3));
  CHECK(std::abs(r.ita_deg - 45.0) < 1.0);
  CHECK(r.skin_type->value() == 2);
  CHECK(r.pixel_count == 80u * 60u);
}

TEST_CASE("DLHSS ignores 1% extreme outliers") {
  const RgbColor skin = rgb_of({65, 10, 15});
  const RgbColor outlier = cielab_to_srgb_clipped({5, 0, -50});
  Image img(100, 100, skin);
  const double clean = estimate_dlhss(img, PixelMask(100, 100, true), {}).ita_deg;
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> pos(0, 9999);
  int placed = 0;
  while (placed < 100) {
    auto& p = img.pixels()[static_cast<std::size_t>(pos(rng))];
    if (p == outlier) continue;
    p = outlier;
    ++placed;
  }
  const double dirty = estimate_dlhss(img, PixelMask(100, 100, true), {}).ita_deg;
  CHECK(std::abs(dirty - clean) < 0.5);
  CHECK(std::abs(dirty - 45.0) < 1.0);
}

TEST_CASE("DLHSS mask handling") {
  const Image img(10, 10, RgbColor{200, 160, 140});
  CHECK(estimate_dlhss(img, PixelMask(10, 10, false), {}).status == Status::EmptyMask);
  CHECK_THROWS_AS(estimate_dlhss(img, PixelMask(10, 11, true), {}), Error);
}

TEST_CASE("property: DLHSS is invariant to pixel permutation") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(100, 240);
  Image img(40, 30);
  PixelMask mask(40, 30);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.pixels()[i] = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng) - 40),
                       static_cast<std::uint8_t>(d(rng) - 60)};
    mask.set(i, d(rng) % 3 != 0);
  }
  const double base = estimate_dlhss(img, mask, {}).ita_deg;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::size_t> order(img.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Image p(40, 30);
    PixelMask pm(40, 30);
    for (std::size_t i = 0; i < order.size(); ++i) {
      p.pixels()[i] = img.pixels()[order[i]];
      pm.set(i, mask[order[i]]);
    }
    REQUIRE(estimate_dlhss(p, pm, {}).ita_deg == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("ColorSeg recovers the skin colour around a dark lesion") {
  const RgbColor skin{224, 172, 148};
  const ItaResult r = estimate_colorseg(skin_with_lesion(skin, kDark), {});
  REQUIRE(r.ok());
  CHECK(std::abs(r.ita_deg - oracle_ita(skin)) < 2.0);
  CHECK(r.method == Method::ColorSeg);
}

TEST_CASE("ColorSeg on a uniform image uses every pixel") {
  const RgbColor skin{224, 172, 148};
  const ItaResult r = estimate_colorseg(Image(50, 40, skin), {});
  REQUIRE(r.ok());
  CHECK(std::abs(r.ita_deg - oracle_ita(skin)) < 0.5);
  CHECK(r.pixel_count == 2000);
}

TEST_CASE("ColorSeg finds no skin in a blue image") {
  CHECK(estimate_colorseg(Image(30, 30, RgbColor{0, 0, 255}), {}).status == Status::NoSkinDetected);
}

TEST_CASE("periphery patches sit at the corners and edge midpoints") {
  const auto p = periphery_patches(200, 20);
  const std::set<std::pair<int, int>> got{{p[0].x, p[0].y}, {p[1].x, p[1].y}, {p[2].x, p[2].y}, {p[3].x, p[3].y},
                                          {p[4].x, p[4].y}, {p[5].x, p[5].y}, {p[6].x, p[6].y}, {p[7].x, p[7].y}};
  const std::set<std::pair<int, int>> want{{0, 0}, {180, 0}, {0, 180}, {180, 180},
                                           {90, 0}, {90, 180}, {0, 90}, {180, 90}};
  CHECK(got == want);
}

TEST_CASE("random patch on (60,8,10) with a small lesion") {
  const RgbColor skin = rgb_of({60, 8, 10});
  const Image img = skin_with_lesion(skin, kDark, 600, 450, 0.15);
  for (auto v : {ItaVariant::Arctan, ItaVariant::Arctan2}) {
    const ItaResult r = estimate_random_patch(img, v, {});
    REQUIRE(r.ok());
    CHECK(r.variant == v);
    CHECK(r.ita_deg == doctest::Approx(oracle_ita(skin)).epsilon(1e-3));
    CHECK(std::abs(r.ita_deg - 45.0) < 1.0);
    CHECK(r.pixel_count == 400);
  }
}

TEST_CASE("random patch sign flip on bluish skin (60,5,-10)") {
  const RgbColor skin = rgb_of({60, 5, -10});
  const Image img = skin_with_lesion(skin, kDark, 600, 450, 0.15);
  const ItaResult rp = estimate_random_patch(img, ItaVariant::Arctan, {});
  const ItaResult rp2 = estimate_random_patch(img, ItaVariant::Arctan2, {});
  REQUIRE(rp.ok());
  REQUIRE(rp2.ok());
  CHECK(rp.ita_deg == doctest::Approx(oracle_ita_arctan(skin)).epsilon(1e-3));
  CHECK(rp2.ita_deg == doctest::Approx(oracle_ita(skin)).epsilon(1e-3));
  CHECK(std::abs(rp.ita_deg + 45.0) < 1.0);
  CHECK(std::abs(rp2.ita_deg - 135.0) < 1.0);
  CHECK(rp.skin_type->value() == 6);
  CHECK(rp2.skin_type->value() == 1);
}

TEST_CASE("random patch is Degenerate when hair covers the periphery") {
  // Dense grid of two-pixel dark lines leaves about 11% of each patch usable,
  // below the default 25% floor.
  Image img(200, 200, RgbColor{220, 190, 170});
  for (int y = 0; y < 200; ++y)
    for (int x = 0; x < 200; ++x)
      if (x % 3 != 2 || y % 3 != 2) img.at(x, y) = {20, 15, 10};
  const ItaResult r = estimate_random_patch(img, ItaVariant::Arctan2, {});
  CHECK(r.status == Status::Degenerate);
}

TEST_CASE("random patch flags a lesion covering all patch centres") {
  const RgbColor skin = rgb_of({60, 8, 10});
  const Image img(300, 300, skin);
  const ItaResult plain = estimate_random_patch(img, ItaVariant::Arctan2, {}, nullptr);
  CHECK(plain.ok());
  const PixelMask everywhere(300, 300, true);
  const ItaResult flagged = estimate_random_patch(img, ItaVariant::Arctan2, {}, &everywhere);
  CHECK(flagged.status == Status::LesionDominated);
  CHECK(flagged.has_value());
  CHECK(flagged.ita_deg == plain.ita_deg);
  PixelMask centre(300, 300);
  for (int y = 100; y < 200; ++y)
    for (int x = 100; x < 200; ++x) centre.set(x, y, true);
  CHECK(estimate_random_patch(img, ItaVariant::Arctan2, {}, &centre).status == Status::Ok);
}

TEST_CASE("property: RP2 >= RP on skin with L >= 50") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> l(52, 80), a(0, 15), b(-20, 25);
  for (int i = 0; i < 25; ++i) {
    const auto c = cielab_to_srgb({l(rng), a(rng), b(rng)});
    if (!c) continue;
    Image img = skin_with_lesion(*c, kDark, 240, 200, 0.2);
    // Some per-patch variation.
    for (int y = 0; y < 200; y += 7) img.at(3, y) = {static_cast<std::uint8_t>(c->r / 2), c->g, c->b};
    const auto rp = estimate_random_patch(img, ItaVariant::Arctan, {});
    const auto rp2 = estimate_random_patch(img, ItaVariant::Arctan2, {});
    REQUIRE(rp.ok());
    REQUIRE(rp2.ok());
    REQUIRE(rp2.ita_deg >= rp.ita_deg);
  }
}

TEST_CASE("GHT method: uniform image is Degenerate") {
  CHECK(estimate_ght(Image(300, 200, RgbColor{200, 160, 140}), {}).status == Status::Degenerate);
  CHECK(estimate_ght(Image(300, 200, RgbColor{0, 0, 0}), {}).status == Status::Degenerate);
}

TEST_CASE("GHT method: global channel gains barely move the estimate") {
  const RgbColor skin = rgb_of({65, 10, 15});
  const Image img = skin_with_lesion(skin, kDark);
  Image gained = img;
  for (auto& p : gained.pixels())
    p = {static_cast<std::uint8_t>(std::min(255.0, std::round(p.r * 1.3))), p.g,
         static_cast<std::uint8_t>(std::round(p.b * 0.9))};
  const auto a = estimate_ght(img, {});
  const auto b = estimate_ght(gained, {});
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(std::abs(a.ita_deg - b.ita_deg) < 2.0);
}

// Grey-world balancing makes a skin-dominated image near-achromatic before
// the ITA is taken, so the balanced estimate does not track the true colour.
// Kept as an expected failure so a future fix shows up.
TEST_CASE("GHT method: (65,10,15) with a lesion within 2 degrees of 45" * doctest::should_fail()) {
  const ItaResult r = estimate_ght(skin_with_lesion(rgb_of({65, 10, 15}), kDark), {});
  REQUIRE(r.ok());
  CHECK(std::abs(r.ita_deg - 45.0) < 2.0);
}

TEST_CASE("identical-colour images: DLHSS, ColorSeg, RP and RP2 agree") {
  for (const LabColor lab : {LabColor{65, 10, 15}, LabColor{72, 8, 12}, LabColor{45, 12, 20}}) {
    const RgbColor c = rgb_of(lab);
    const Image img(240, 180, c);
    const auto r1 = estimate_dlhss(img, PixelMask(240, 180, true), {});
    const auto r2 = estimate_colorseg(img, {});
    const auto r3 = estimate_random_patch(img, ItaVariant::Arctan, {});
    const auto r4 = estimate_random_patch(img, ItaVariant::Arctan2, {});
    for (const auto* r : {&r1, &r2, &r3, &r4}) {
      REQUIRE(r->ok());
      require_consistent(*r);
      CHECK(std::abs(r->ita_deg - r1.ita_deg) < 0.5);
      CHECK(r->skin_type == r1.skin_type);
    }
  }
}

TEST_CASE("estimator config validation") {
  EstimatorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.patch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.gates.cr = {180, 135};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.blackhat_kernel = 4;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.side = 20;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("config files and overrides") {
  TempDir dir;
  testing::write_file(dir / "c.txt", "# comment\nside = 240\nthresholds=60,45,30,20,5\ngate.hue=0,30\nght.tau=0.1\n");
  const EstimatorConfig cfg = load_estimator_config(dir / "c.txt");
  CHECK(cfg.side == 240);
  CHECK(cfg.thresholds[0] == 60);
  CHECK(cfg.gates.hue.hi == 30);
  CHECK(cfg.ght.tau == 0.1);
  CHECK(config_hash(cfg) != config_hash({}));
  CHECK(config_hash({}) == config_hash({}));
  CHECK(describe({}).find("patch_size=20") != std::string::npos);

  testing::write_file(dir / "bad.txt", "side=240\nbogus=1\n");
  try {
    load_estimator_config(dir / "bad.txt");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Parse);
    CHECK(std::string(e.what()).find("bad.txt:2") != std::string::npos);
  }
}

TEST_CASE("tones CSV format and round trip") {
  ItaResult ok;
  ok.image_id = "img_1";
  ok.method = Method::RandomPatch;
  ok.variant = ItaVariant::Arctan;
  ok.ita_deg = -0.0001;
  ok.skin_type = bin_skin_type(ok.ita_deg);
  ok.status = Status::Ok;
  ok.pixel_count = 400;
  ItaResult bad;
  bad.image_id = "img_2";
  bad.method = Method::ColorSeg;
  bad.status = Status::NoSkinDetected;
  ItaResult flagged = ok;
  flagged.image_id = "img_3";
  flagged.ita_deg = 47.12345;
  flagged.status = Status::LesionDominated;

  std::ostringstream out;
  const std::vector<ItaResult> rows{ok, bad, flagged};
  write_tones_csv(out, rows);
  CHECK(out.str() ==
        "image_id,method,variant,ita_deg,skin_type,status,pixel_count\n"
        "img_1,RandomPatch,Arctan,0.000,6,Ok,400\n"
        "img_2,ColorSeg,Arctan2,,,NoSkinDetected,0\n"
        "img_3,RandomPatch,Arctan,47.123,,LesionDominated,400\n");

  TempDir dir;
  write_tones_csv(dir / "t.csv", rows);
  const auto back = read_tones_csv(dir / "t.csv");
  REQUIRE(back.size() == 3);
  CHECK(back[0].ok());
  CHECK(back[0].skin_type->value() == 6);
  CHECK(back[1].status == Status::NoSkinDetected);
  CHECK(back[2].ita_deg == doctest::Approx(47.123));

  testing::write_file(dir / "broken.csv", "image_id,method,variant,ita_deg,skin_type,status,pixel_count\n"
                                          "a,Dlhss,Arctan2,12.0,5,Ok,3\n"
                                          "b,Dlhss,Arctan2,abc,5,Ok,3\n");
  try {
    read_tones_csv(dir / "broken.csv");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Parse);
    CHECK(std::string(e.what()).find("broken.csv:3") != std::string::npos);
  }
}

TEST_CASE("batch runs") {
  TempDir dir;
  const auto images = dir / "images";
  const auto masks = dir / "masks";
  std::filesystem::create_directories(images);
  std::filesystem::create_directories(masks);
  CHECK(run_batch(images, std::nullopt, Method::ColorSeg, ItaVariant::Arctan2, {}).empty());

  const RgbColor skin = rgb_of({65, 10, 15});
  for (const char* id : {"c", "a", "b"}) {
    save_png(skin_with_lesion(skin, kDark, 240, 180), images / (std::string(id) + ".png"));
    save_mask_png(PixelMask(240, 180, true), masks / (std::string(id) + "_mask.png"));
  }
  testing::write_file(images / "broken.jpg", "\xff\xd8\xff garbage");
  testing::write_file(images / "notes.txt", "ignored");

  const auto rows = run_batch(images, masks, Method::Dlhss, ItaVariant::Arctan2, {});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].image_id == "a");
  CHECK(rows[1].image_id == "b");
  CHECK(rows[2].image_id == "broken");
  CHECK(rows[2].status == Status::Error);
  CHECK(rows[3].image_id == "c");
  CHECK(rows[3].ok());

  std::ostringstream one, many;
  write_tones_csv(one, run_batch(images, masks, Method::RandomPatch, ItaVariant::Arctan2, {}, 1));
  write_tones_csv(many, run_batch(images, masks, Method::RandomPatch, ItaVariant::Arctan2, {}, 4));
  CHECK(one.str() == many.str());

  try {
    run_batch(images, std::nullopt, Method::Dlhss, ItaVariant::Arctan2, {});
    FAIL("expected MissingMaskDir");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingMaskDir);
  }
  CHECK_THROWS_AS(run_batch(dir / "nowhere", std::nullopt, Method::ColorSeg, ItaVariant::Arctan2, {}), Error);
}
