#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "skintone/config.hpp"
#include "skintone/tones_csv.hpp"
#include "support.hpp"

using testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "skintone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = skintone::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Small corpus: light images plus two bluish ones.
void make_corpus(const TempDir& dir) {
  testing::write_file(dir / "spec.txt",
                      "skin_lab=66,14,18\nlesion_radius_frac=0.15\nwidth=240\nheight=180\ncount=4\nprefix=img\n");
  REQUIRE(run({"synth", "--spec", (dir / "spec.txt").string(), "--out", (dir / "corpus").string()}).code == 0);
}

}  // namespace

TEST_CASE("version and help") {
  const Run v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("skintone ") != std::string::npos);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(skintone::config_hash({})));
  CHECK(v.out.find(hash) != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("usage errors exit 1 and print help") {
  const Run none = run({});
  CHECK(none.code == 1);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(run({"estimate", "--method", "nope", "--images", "x", "--out", "y"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"compare", "--a", "x.csv"}).code == 1);
}

TEST_CASE("missing data files exit 2 and name the file") {
  TempDir dir;
  testing::write_file(dir / "p.csv", "image_id,true_label,pred_label\na,MEL,MEL\n");
  const Run r = run({"fairness", "--preds", (dir / "p.csv").string(), "--tones", (dir / "missing.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.csv") != std::string::npos);
}

TEST_CASE("malformed rows exit 2 and name file and row") {
  TempDir dir;
  testing::write_file(dir / "t.csv", std::string(skintone::kTonesHeader) + "\na,Dlhss,Arctan2,10.0,6,Ok,1\nb,Dlhss\n");
  const Run r = run({"distribution", "--tones", (dir / "t.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("t.csv:3") != std::string::npos);
}

TEST_CASE("estimate rp2 writes RandomPatch / Arctan2 rows and echoes the config") {
  TempDir dir;
  make_corpus(dir);
  const Run r = run({"estimate", "--method", "rp2", "--images", (dir / "corpus/images").string(), "--out",
                     (dir / "tones.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# command=estimate") != std::string::npos);
  CHECK(r.out.find("# patch_size=20") != std::string::npos);
  CHECK(r.out.find("# config_hash=") != std::string::npos);
  const auto rows = skintone::read_tones_csv(dir / "tones.csv");
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.method == skintone::Method::RandomPatch);
    CHECK(row.variant == skintone::ItaVariant::Arctan2);
  }
}

TEST_CASE("estimate: flags win over the config file") {
  TempDir dir;
  make_corpus(dir);
  testing::write_file(dir / "cfg.txt", "patch_size=10\nside=100\n");
  const Run r = run({"estimate", "--method", "rp", "--images", (dir / "corpus/images").string(), "--out",
                     (dir / "t.csv").string(), "--config", (dir / "cfg.txt").string(), "--set", "patch_size=16"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# patch_size=16") != std::string::npos);
  CHECK(r.out.find("# side=100") != std::string::npos);
  CHECK(skintone::read_tones_csv(dir / "t.csv")[0].pixel_count == 256);
}

TEST_CASE("estimate dlhss needs masks") {
  TempDir dir;
  make_corpus(dir);
  const Run r = run({"estimate", "--method", "dlhss", "--images", (dir / "corpus/images").string(), "--out",
                     (dir / "t.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("MissingMaskDir") != std::string::npos);
}

TEST_CASE("estimate output is identical across job counts") {
  TempDir dir;
  make_corpus(dir);
  const auto images = (dir / "corpus/images").string();
  REQUIRE(run({"estimate", "--method", "colorseg", "--images", images, "--out", (dir / "a.csv").string()}).code == 0);
  REQUIRE(run({"estimate", "--method", "colorseg", "--images", images, "--out", (dir / "b.csv").string(), "--jobs",
               "3"})
              .code == 0);
  CHECK(testing::read_file(dir / "a.csv") == testing::read_file(dir / "b.csv"));
}

TEST_CASE("compare writes a 6x6 matrix and the joint-dark list") {
  TempDir dir;
  const std::string header(skintone::kTonesHeader);
  testing::write_file(dir / "a.csv", header + "\nx,Dlhss,Arctan2,60.0,1,Ok,5\ny,Dlhss,Arctan2,5.0,6,Ok,5\n"
                                              "z,Dlhss,Arctan2,20.0,5,Ok,5\n");
  testing::write_file(dir / "b.csv", header + "\nx,RandomPatch,Arctan,60.0,1,Ok,5\ny,RandomPatch,Arctan,15.0,5,Ok,5\n"
                                              "z,RandomPatch,Arctan,45.0,2,Ok,5\n");
  const Run r = run({"compare", "--a", (dir / "a.csv").string(), "--b", (dir / "b.csv").string(), "--dark-cutoff",
                     "28", "--out", (dir / "m.csv").string()});
  REQUIRE(r.code == 0);
  const std::string m = testing::read_file(dir / "m.csv");
  CHECK(m ==
        "type_a,b_1,b_2,b_3,b_4,b_5,b_6\n"
        "1,1,0,0,0,0,0\n"
        "2,0,0,0,0,0,0\n"
        "3,0,0,0,0,0,0\n"
        "4,0,0,0,0,0,0\n"
        "5,0,1,0,0,0,0\n"
        "6,0,0,0,0,1,0\n");
  CHECK(testing::read_file(dir / "m_dark_ids.txt") == "y\n");
}

TEST_CASE("distribution, fairness and report") {
  TempDir dir;
  const std::string header(skintone::kTonesHeader);
  testing::write_file(dir / "t.csv", header + "\na,Dlhss,Arctan2,60.0,1,Ok,5\nb,Dlhss,Arctan2,5.0,6,Ok,5\n"
                                              "c,Dlhss,Arctan2,,,Error,0\n");
  testing::write_file(dir / "p.csv", "image_id,true_label,pred_label\na,MEL,MEL\nb,NV,MEL\nc,NV,NV\n");
  const Run d = run({"distribution", "--tones", (dir / "t.csv").string(), "--out", (dir / "d.csv").string(), "--svg",
                     (dir / "d.svg").string()});
  REQUIRE(d.code == 0);
  CHECK(testing::read_file(dir / "d.csv").find("1,1,50.000") != std::string::npos);
  CHECK(testing::read_file(dir / "d.svg").rfind("<svg", 0) == 0);

  const Run f = run({"fairness", "--preds", (dir / "p.csv").string(), "--tones", (dir / "t.csv").string(), "--out",
                     (dir / "f.csv").string()});
  REQUIRE(f.code == 0);
  const std::string fc = testing::read_file(dir / "f.csv");
  CHECK(fc.find("1,1,1.000000,1.000000") != std::string::npos);
  CHECK(fc.find("6,1,0.000000,0.000000") != std::string::npos);

  const Run rep = run({"report", "--tones", (dir / "t.csv").string(), "--tones", (dir / "t.csv").string(), "--preds",
                       (dir / "p.csv").string(), "--out", (dir / "r.txt").string(), "--svg", (dir / "r.svg").string()});
  REQUIRE(rep.code == 0);
  const std::string text = testing::read_file(dir / "r.txt");
  CHECK(text.find("Skin type distribution") != std::string::npos);
  CHECK(text.find("Pairwise agreement") != std::string::npos);
  CHECK(text.find("Fairness") != std::string::npos);
}

TEST_CASE("split baseline and datashift") {
  TempDir dir;
  std::string records = "image_id,label\n", tones = std::string(skintone::kTonesHeader) + "\n";
  for (int i = 0; i < 20; ++i) {
    records += "i" + std::to_string(i) + (i % 2 ? ",MEL\n" : ",NV\n");
    tones += "i" + std::to_string(i) + ",Dlhss,Arctan2," + (i < 15 ? "50.0,2" : "20.0,5") + ",Ok,5\n";
  }
  testing::write_file(dir / "r.csv", records);
  testing::write_file(dir / "t.csv", tones);

  const Run a = run({"split", "--records", (dir / "r.csv").string(), "--seed", "7", "--out", (dir / "a.csv").string()});
  REQUIRE(a.code == 0);
  const Run b = run({"split", "--records", (dir / "r.csv").string(), "--seed", "7", "--out", (dir / "b.csv").string()});
  REQUIRE(b.code == 0);
  CHECK(testing::read_file(dir / "a.csv") == testing::read_file(dir / "b.csv"));
  CHECK(testing::read_file(dir / "a.csv").rfind("# seed=7 mode=baseline\n", 0) == 0);

  const Run ds = run({"split", "--mode", "datashift", "--records", (dir / "r.csv").string(), "--tones",
                      (dir / "t.csv").string(), "--out", (dir / "ds.csv").string()});
  REQUIRE(ds.code == 0);
  CHECK(ds.out.find("test 5") != std::string::npos);

  CHECK(run({"split", "--mode", "datashift", "--records", (dir / "r.csv").string(), "--out",
             (dir / "x.csv").string()})
            .code == 1);
  CHECK(run({"split", "--records", (dir / "r.csv").string(), "--ratios", "0.5,0.5,0.5", "--out",
             (dir / "x.csv").string()})
            .code == 2);
}
