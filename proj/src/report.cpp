#include "skintone/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace skintone {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948"};

}  // namespace

void write_distribution_csv(std::ostream& out, const TypeDistribution& d) {
  out << "skin_type,count,percent\n";
  for (std::size_t t = 0; t < kSkinTypeCount; ++t)
    out << t + 1 << ',' << d.counts[t] << ',' << fixed(d.percent[t], 3) << '\n';
}

void write_agreement_csv(std::ostream& out, const AgreementMatrix& m) {
  out << "type_a";
  for (std::size_t c = 0; c < kSkinTypeCount; ++c) out << ",b_" << c + 1;
  out << '\n';
  for (std::size_t r = 0; r < kSkinTypeCount; ++r) {
    out << r + 1;
    for (std::size_t c = 0; c < kSkinTypeCount; ++c) out << ',' << m.cells[r][c];
    out << '\n';
  }
}

void write_fairness_csv(std::ostream& out, std::span<const GroupReport> groups) {
  out << "skin_type,size,accuracy,balanced_accuracy,weighted_precision,weighted_recall,weighted_f1\n";
  for (const auto& g : groups) {
    const auto& m = g.metrics;
    out << g.type.value() << ',' << g.size << ',' << fixed(m.accuracy, 6) << ','
        << fixed(m.balanced_accuracy, 6) << ',' << fixed(m.weighted_precision, 6) << ','
        << fixed(m.weighted_recall, 6) << ',' << fixed(m.weighted_f1, 6) << '\n';
  }
}

void write_distribution_table(std::ostream& out, const TypeDistribution& d, std::string_view title) {
  out << title << '\n';
  out << "  type   count  percent\n";
  for (std::size_t t = 0; t < kSkinTypeCount; ++t) {
    char line[80];
    std::snprintf(line, sizeof line, "  %4zu  %6zu  %6.2f%%\n", t + 1, d.counts[t], d.percent[t]);
    out << line;
  }
  out << "  included " << d.included << ", excluded " << d.excluded << "\n";
}

void write_agreement_table(std::ostream& out, const AgreementMatrix& m, std::string_view name_a,
                           std::string_view name_b) {
  out << "rows: " << name_a << ", columns: " << name_b << '\n';
  out << "      ";
  for (std::size_t c = 0; c < kSkinTypeCount; ++c) {
    char cell[16];
    std::snprintf(cell, sizeof cell, "%7zu", c + 1);
    out << cell;
  }
  out << '\n';
  for (std::size_t r = 0; r < kSkinTypeCount; ++r) {
    char head[16];
    std::snprintf(head, sizeof head, "  %3zu ", r + 1);
    out << head;
    for (std::size_t c = 0; c < kSkinTypeCount; ++c) {
      char cell[16];
      std::snprintf(cell, sizeof cell, "%7zu", m.cells[r][c]);
      out << cell;
    }
    out << '\n';
  }
  const double agree = m.total() ? 100.0 * static_cast<double>(m.diagonal()) / static_cast<double>(m.total()) : 0.0;
  out << "  joined " << m.joined << ", excluded " << m.excluded << ", agreement " << fixed(agree, 2) << "%\n";
  out << "  jointly dark (ITA <= " << fixed(m.dark_cutoff, 1) << "): " << m.joint_dark_ids.size() << '\n';
}

void write_fairness_table(std::ostream& out, std::span<const GroupReport> groups, std::string_view title) {
  out << title << '\n';
  out << "  type   size   acc     bal.acc  w.prec   w.rec    w.f1\n";
  for (const auto& g : groups) {
    const auto& m = g.metrics;
    char line[128];
    std::snprintf(line, sizeof line, "  %4d  %5zu  %6.4f  %6.4f   %6.4f   %6.4f   %6.4f\n", g.type.value(), g.size,
                  m.accuracy, m.balanced_accuracy, m.weighted_precision, m.weighted_recall, m.weighted_f1);
    out << line;
  }
}

std::string bar_chart_svg(std::string_view title, std::span<const std::string> categories,
                          std::span<const BarSeries> series, std::string_view y_label) {
  constexpr double kWidth = 640, kHeight = 360, kLeft = 60, kRight = 140, kTop = 40, kBottom = 40;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double y_max = 0.0;
  for (const auto& s : series)
    for (double v : s.values) y_max = std::max(y_max, v);
  if (y_max <= 0.0) y_max = 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
  svg << "<text transform=\"translate(15," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(y_label) << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = y_max * tick / 4.0;
    const double y = kTop + plot_h - plot_h * tick / 4.0;
    svg << "<text x=\"" << kLeft - 5 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fixed(v, 2)
        << "</text>\n";
  }

  const std::size_t n_cat = std::max<std::size_t>(1, categories.size());
  const std::size_t n_ser = std::max<std::size_t>(1, series.size());
  const double group_w = plot_w / static_cast<double>(n_cat);
  const double bar_w = group_w * 0.8 / static_cast<double>(n_ser);
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c);
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
      const double h = plot_h * std::max(0.0, v) / y_max;
      svg << "<rect x=\"" << fixed(gx + group_w * 0.1 + bar_w * static_cast<double>(s), 2) << "\" y=\""
          << fixed(kTop + plot_h - h, 2) << "\" width=\"" << fixed(bar_w, 2) << "\" height=\"" << fixed(h, 2)
          << "\" fill=\"" << kPalette[s % std::size(kPalette)] << "\"/>\n";
    }
    svg << "<text x=\"" << fixed(gx + group_w / 2, 2) << "\" y=\"" << kTop + plot_h + 15
        << "\" text-anchor=\"middle\">" << xml_escape(categories[c]) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = kTop + 15.0 * static_cast<double>(s);
    svg << "<rect x=\"" << kLeft + plot_w + 15 << "\" y=\"" << y << "\" width=\"10\" height=\"10\" fill=\""
        << kPalette[s % std::size(kPalette)] << "\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w + 30 << "\" y=\"" << y + 9 << "\">" << xml_escape(series[s].name)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace skintone
