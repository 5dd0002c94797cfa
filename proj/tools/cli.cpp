#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "skintone/analysis.hpp"
#include "skintone/batch.hpp"
#include "skintone/config.hpp"
#include "skintone/error.hpp"
#include "skintone/report.hpp"
#include "skintone/splits.hpp"
#include "skintone/synthgen.hpp"
#include "skintone/tones_csv.hpp"

namespace skintone::cli {

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string version_text() {
  return std::string("skintone ") + SKINTONE_VERSION + "\ndefault-config-hash " + hex64(config_hash({}));
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw Error(Errc::Io, "no such file: " + p.string());
}

void require_dir(const fs::path& p) {
  if (!fs::is_directory(p)) throw Error(Errc::Io, "no such directory: " + p.string());
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot write " + p.string());
  return f;
}

void write_text(const fs::path& p, const std::string& text) { open_out(p) << text; }

// Every run starts with the parameters it actually used, one `# key=value`
// line each, so an output can be reproduced from the log alone.
class Echo {
 public:
  Echo(std::ostream& out, std::string_view command) : out_(out) { line("command", command); }
  Echo& line(std::string_view key, std::string_view value) {
    out_ << "# " << key << '=' << value << '\n';
    return *this;
  }
  Echo& line(std::string_view key, double value) { return line(key, format_number(value)); }
  Echo& block(const std::string& text) {
    std::size_t start = 0;
    while (start < text.size()) {
      const auto end = text.find('\n', start);
      out_ << "# " << text.substr(start, end - start) << '\n';
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return *this;
  }

 private:
  std::ostream& out_;
};

struct MethodChoice {
  Method method;
  ItaVariant variant;
};

const std::map<std::string, MethodChoice>& method_names() {
  static const std::map<std::string, MethodChoice> names{
      {"dlhss", {Method::Dlhss, ItaVariant::Arctan2}},
      {"colorseg", {Method::ColorSeg, ItaVariant::Arctan2}},
      {"rp", {Method::RandomPatch, ItaVariant::Arctan}},
      {"rp2", {Method::RandomPatch, ItaVariant::Arctan2}},
      {"ght", {Method::Ght, ItaVariant::Arctan2}},
  };
  return names;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string method;
  fs::path images;
  std::optional<fs::path> masks;
  fs::path out;
  std::optional<fs::path> config;
  std::vector<std::string> settings;
  unsigned jobs = 1;
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  const MethodChoice choice = method_names().at(a.method);
  require_dir(a.images);
  if (a.masks) require_dir(*a.masks);
  EstimatorConfig cfg;
  if (a.config) {
    require_file(*a.config);
    cfg = load_estimator_config(*a.config);
  }
  for (const auto& s : a.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(Errc::Parse, "--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();

  Echo(out, "estimate")
      .line("method", to_string(choice.method))
      .line("variant", to_string(choice.variant))
      .line("images", a.images.string())
      .line("masks", a.masks ? a.masks->string() : "")
      .line("jobs", std::to_string(a.jobs))
      .line("config_hash", hex64(config_hash(cfg)))
      .block(describe(cfg));

  const auto results = run_batch(a.images, a.masks, choice.method, choice.variant, cfg, a.jobs);
  write_tones_csv(a.out, results);
  std::size_t ok = 0;
  for (const auto& r : results) ok += r.ok() ? 1 : 0;
  out << "estimated " << results.size() << " images (" << ok << " Ok) -> " << a.out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  fs::path a, b, out;
  std::optional<fs::path> dark_out;
  double dark_cutoff = 28.0;
};

fs::path default_dark_path(const fs::path& out) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + "_dark_ids.txt");
  return p;
}

int run_compare(const CompareArgs& a, std::ostream& out) {
  require_file(a.a);
  require_file(a.b);
  const fs::path dark_path = a.dark_out ? *a.dark_out : default_dark_path(a.out);
  Echo(out, "compare")
      .line("a", a.a.string())
      .line("b", a.b.string())
      .line("dark_cutoff", a.dark_cutoff)
      .line("dark_ids", dark_path.string());

  const auto ta = read_tones_csv(a.a);
  const auto tb = read_tones_csv(a.b);
  const AgreementMatrix m = agreement_matrix(ta, tb, a.dark_cutoff);
  {
    auto f = open_out(a.out);
    write_agreement_csv(f, m);
  }
  {
    auto f = open_out(dark_path);
    for (const auto& id : m.joint_dark_ids) f << id << '\n';
  }
  write_agreement_table(out, m, a.a.filename().string(), a.b.filename().string());
  return kExitOk;
}

// ---------------------------------------------------------------- distribution

struct DistributionArgs {
  fs::path tones;
  std::optional<fs::path> out, svg;
};

std::vector<std::string> type_labels() {
  std::vector<std::string> labels;
  for (std::size_t t = 1; t <= kSkinTypeCount; ++t) labels.push_back("Type " + std::to_string(t));
  return labels;
}

int run_distribution(const DistributionArgs& a, std::ostream& out) {
  require_file(a.tones);
  Echo(out, "distribution").line("tones", a.tones.string());
  const auto tones = read_tones_csv(a.tones);
  const TypeDistribution d = type_distribution(tones);
  write_distribution_table(out, d, a.tones.filename().string());
  if (a.out) {
    auto f = open_out(*a.out);
    write_distribution_csv(f, d);
  }
  if (a.svg) {
    const auto labels = type_labels();
    const BarSeries s{a.tones.stem().string(), {d.percent.begin(), d.percent.end()}};
    write_text(*a.svg, bar_chart_svg("Skin type distribution", labels, std::span(&s, 1), "percent"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- fairness

struct FairnessArgs {
  fs::path preds, tones;
  std::optional<fs::path> out, svg;
};

BarSeries ba_series(std::string name, std::span<const GroupReport> groups) {
  BarSeries s{std::move(name), std::vector<double>(kSkinTypeCount, 0.0)};
  for (const auto& g : groups) s.values[g.type.index()] = g.metrics.balanced_accuracy;
  return s;
}

int run_fairness(const FairnessArgs& a, std::ostream& out) {
  require_file(a.preds);
  require_file(a.tones);
  Echo(out, "fairness").line("preds", a.preds.string()).line("tones", a.tones.string());
  const auto preds = read_predictions_csv(a.preds);
  const auto tones = read_tones_csv(a.tones);
  const auto groups = fairness_by_type(preds, tones);
  write_fairness_table(out, groups, "per skin type (" + a.tones.filename().string() + ")");
  if (a.out) {
    auto f = open_out(*a.out);
    write_fairness_csv(f, groups);
  }
  if (a.svg) {
    const auto labels = type_labels();
    const BarSeries s = ba_series(a.tones.stem().string(), groups);
    write_text(*a.svg, bar_chart_svg("Balanced accuracy per skin type", labels, std::span(&s, 1),
                                     "balanced accuracy"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- split

struct SplitArgs {
  std::string mode = "baseline";
  fs::path records;
  std::optional<fs::path> tones;
  fs::path out;
  std::uint64_t seed = 0;
  std::vector<double> ratios{0.57, 0.14, 0.29};
  std::optional<std::size_t> test_size;
  double cutoff = 41.0;
  double train_fraction = 0.8;
};

int run_split(const SplitArgs& a, std::ostream& out, std::ostream& err) {
  if (a.mode == "datashift" && !a.tones) {
    err << "split: --mode datashift requires --tones\n";
    return kExitUsage;
  }
  if (a.ratios.size() != 3) {
    err << "split: --ratios expects three values\n";
    return kExitUsage;
  }
  require_file(a.records);
  if (a.tones) require_file(*a.tones);

  Echo echo(out, "split");
  echo.line("mode", a.mode).line("records", a.records.string()).line("seed", std::to_string(a.seed));
  const auto records = read_labels_csv(a.records);
  SplitAssignment split;
  if (a.mode == "baseline") {
    echo.line("ratios", format_number(a.ratios[0]) + "," + format_number(a.ratios[1]) + "," +
                            format_number(a.ratios[2]));
    echo.line("test_size", a.test_size ? std::to_string(*a.test_size) : "");
    split = stratified_split(records, {a.ratios[0], a.ratios[1], a.ratios[2]}, a.seed, a.test_size);
  } else {
    echo.line("tones", a.tones->string()).line("cutoff", a.cutoff).line("train_fraction", a.train_fraction);
    const auto tones = read_tones_csv(*a.tones);
    split = datashift_split(tones, records, a.seed, a.cutoff, a.train_fraction);
  }
  write_splits_csv(a.out, split);
  out << "train " << split.count(Subset::Train) << ", val " << split.count(Subset::Val) << ", test "
      << split.count(Subset::Test);
  if (split.unassigned) out << ", unassigned " << split.unassigned;
  out << " -> " << a.out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  fs::path spec, out;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
};

std::string describe(const CorpusSpec& c) {
  const auto& s = c.base;
  auto lab = [](const LabColor& v) {
    return format_number(v.l) + "," + format_number(v.a) + "," + format_number(v.b);
  };
  auto range = [](const std::optional<Interval>& r) {
    return r ? format_number(r->lo) + "," + format_number(r->hi) : std::string();
  };
  std::string text;
  text += "skin_lab=" + lab(s.skin_lab) + "\nlesion_lab=" + lab(s.lesion_lab);
  text += "\nlesion_radius_frac=" + format_number(s.lesion_radius_frac);
  text += "\nhair_count=" + std::to_string(s.hair_count) + "\nhair_width=" + std::to_string(s.hair_width);
  text += "\nnoise_sigma=" + format_number(s.noise_sigma);
  text += "\nchannel_gains=" + format_number(s.channel_gains[0]) + "," + format_number(s.channel_gains[1]) + "," +
          format_number(s.channel_gains[2]);
  text += "\nwidth=" + std::to_string(s.width) + "\nheight=" + std::to_string(s.height);
  text += "\nseed=" + std::to_string(s.seed) + "\ncount=" + std::to_string(c.count) + "\nprefix=" + c.prefix;
  text += "\nskin_l_range=" + range(c.skin_l_range) + "\nskin_a_range=" + range(c.skin_a_range) +
          "\nskin_b_range=" + range(c.skin_b_range) + "\n";
  return text;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  require_file(a.spec);
  CorpusSpec corpus = read_corpus_spec(a.spec);
  if (a.count) corpus.count = *a.count;
  if (a.seed) corpus.base.seed = *a.seed;
  Echo(out, "synth").line("spec", a.spec.string()).line("out", a.out.string()).block(describe(corpus));
  const auto truths = write_synthetic_corpus(a.out, corpus);
  out << "generated " << truths.size() << " images -> " << a.out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<fs::path> tones;
  std::optional<fs::path> preds;
  fs::path out;
  std::optional<fs::path> svg;
  double dark_cutoff = 28.0;
};

int run_report(const ReportArgs& a, std::ostream& out) {
  for (const auto& t : a.tones) require_file(t);
  if (a.preds) require_file(*a.preds);
  Echo echo(out, "report");
  for (const auto& t : a.tones) echo.line("tones", t.string());
  echo.line("preds", a.preds ? a.preds->string() : "").line("dark_cutoff", a.dark_cutoff);

  std::vector<std::vector<ItaResult>> tones;
  for (const auto& t : a.tones) tones.push_back(read_tones_csv(t));
  std::optional<std::vector<PredictionRecord>> preds;
  if (a.preds) preds = read_predictions_csv(*a.preds);

  std::ostringstream text;
  text << "skintone report\n\n== Skin type distribution ==\n";
  std::vector<BarSeries> dist_series;
  for (std::size_t i = 0; i < tones.size(); ++i) {
    const auto d = type_distribution(tones[i]);
    write_distribution_table(text, d, a.tones[i].filename().string());
    text << '\n';
    dist_series.push_back({a.tones[i].stem().string(), {d.percent.begin(), d.percent.end()}});
  }
  if (tones.size() > 1) {
    text << "== Pairwise agreement ==\n";
    for (std::size_t i = 0; i < tones.size(); ++i)
      for (std::size_t j = i + 1; j < tones.size(); ++j) {
        write_agreement_table(text, agreement_matrix(tones[i], tones[j], a.dark_cutoff),
                              a.tones[i].filename().string(), a.tones[j].filename().string());
        text << '\n';
      }
  }
  std::vector<BarSeries> ba;
  if (preds) {
    text << "== Fairness ==\n";
    text << "overall balanced accuracy " << format_number(classification_metrics(*preds).balanced_accuracy)
         << "\n";
    for (std::size_t i = 0; i < tones.size(); ++i) {
      const auto groups = fairness_by_type(*preds, tones[i]);
      write_fairness_table(text, groups, a.tones[i].filename().string());
      text << '\n';
      ba.push_back(ba_series(a.tones[i].stem().string(), groups));
    }
  }
  write_text(a.out, text.str());
  if (a.svg) {
    const auto labels = type_labels();
    if (preds)
      write_text(*a.svg, bar_chart_svg("Balanced accuracy per skin type", labels, ba, "balanced accuracy"));
    else
      write_text(*a.svg, bar_chart_svg("Skin type distribution", labels, dist_series, "percent"));
  }
  out << "report -> " << a.out.string() << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skin tone (ITA) estimation and fairness analysis toolkit", "skintone"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);

  std::vector<std::string> method_keys;
  for (const auto& [k, v] : method_names()) method_keys.push_back(k);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate ITA and skin type for every image in a directory");
  estimate->add_option("--method", est.method, "dlhss | colorseg | rp | rp2 | ght")
      ->required()
      ->check(CLI::IsMember(method_keys));
  estimate->add_option("--images", est.images, "Image directory")->required();
  estimate->add_option("--masks", est.masks, "Skin mask directory (<id>_mask.png), required by dlhss");
  estimate->add_option("--out", est.out, "Tones CSV to write")->required();
  estimate->add_option("--config", est.config, "key=value estimator configuration file");
  estimate->add_option("--set", est.settings, "Override one configuration key (key=value); wins over --config");
  estimate->add_option("--jobs", est.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Agreement matrix between two tones CSVs");
  compare->add_option("--a", cmp.a, "Tones CSV of the first estimator")->required();
  compare->add_option("--b", cmp.b, "Tones CSV of the second estimator")->required();
  compare->add_option("--dark-cutoff", cmp.dark_cutoff, "ITA at or below which an image counts as dark");
  compare->add_option("--out", cmp.out, "Agreement matrix CSV to write")->required();
  compare->add_option("--dark-out", cmp.dark_out, "Joint-dark id list (default <out>_dark_ids.txt)");

  DistributionArgs dist;
  auto* distribution = app.add_subcommand("distribution", "Skin type distribution of a tones CSV");
  distribution->add_option("--tones", dist.tones, "Tones CSV")->required();
  distribution->add_option("--out", dist.out, "Distribution CSV to write");
  distribution->add_option("--svg", dist.svg, "Bar chart to write");

  FairnessArgs fair;
  auto* fairness = app.add_subcommand("fairness", "Classification metrics per skin type");
  fairness->add_option("--preds", fair.preds, "Predictions CSV (image_id,true_label,pred_label)")->required();
  fairness->add_option("--tones", fair.tones, "Tones CSV")->required();
  fairness->add_option("--out", fair.out, "Per-type metrics CSV to write");
  fairness->add_option("--svg", fair.svg, "Bar chart to write");

  SplitArgs spl;
  auto* split = app.add_subcommand("split", "Stratified baseline or data-shift train/val/test split");
  split->add_option("--mode", spl.mode, "baseline | datashift")->check(CLI::IsMember({"baseline", "datashift"}));
  split->add_option("--records", spl.records, "CSV with image_id and label (or true_label)")->required();
  split->add_option("--tones", spl.tones, "Tones CSV (datashift)");
  split->add_option("--out", spl.out, "Splits CSV to write")->required();
  split->add_option("--seed", spl.seed, "Shuffle seed");
  split->add_option("--ratios", spl.ratios, "train,val,test (baseline)")->delimiter(',')->expected(3);
  split->add_option("--test-size", spl.test_size, "Fixed test set size (baseline)");
  split->add_option("--cutoff", spl.cutoff, "ITA above which an image is light (datashift)");
  split->add_option("--train-fraction", spl.train_fraction, "Train share of the light pool (datashift)");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with known ITA");
  synth->add_option("--spec", syn.spec, "key=value corpus spec file")->required();
  synth->add_option("--out", syn.out, "Output directory")->required();
  synth->add_option("--count", syn.count, "Override the number of images");
  synth->add_option("--seed", syn.seed, "Override the base seed");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Text (and optional SVG) report over tones and predictions");
  report->add_option("--tones", rep.tones, "Tones CSV, repeatable")->required();
  report->add_option("--preds", rep.preds, "Predictions CSV");
  report->add_option("--dark-cutoff", rep.dark_cutoff, "ITA at or below which an image counts as dark");
  report->add_option("--out", rep.out, "Text report to write")->required();
  report->add_option("--svg", rep.svg, "Bar chart to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (estimate->parsed()) return run_estimate(est, out);
    if (compare->parsed()) return run_compare(cmp, out);
    if (distribution->parsed()) return run_distribution(dist, out);
    if (fairness->parsed()) return run_fairness(fair, out);
    if (split->parsed()) return run_split(spl, out, err);
    if (synth->parsed()) return run_synth(syn, out);
    if (report->parsed()) return run_report(rep, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace skintone::cli
