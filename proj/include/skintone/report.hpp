#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skintone/analysis.hpp"

namespace skintone {

// CSV forms.
void write_distribution_csv(std::ostream& out, const TypeDistribution& d);
void write_agreement_csv(std::ostream& out, const AgreementMatrix& m);
void write_fairness_csv(std::ostream& out, std::span<const GroupReport> groups);

// Fixed-width text forms.
void write_distribution_table(std::ostream& out, const TypeDistribution& d, std::string_view title);
void write_agreement_table(std::ostream& out, const AgreementMatrix& m, std::string_view name_a,
                           std::string_view name_b);
void write_fairness_table(std::ostream& out, std::span<const GroupReport> groups, std::string_view title);

struct BarSeries {
  std::string name;
  std::vector<double> values;  // one per category
};

/// Grouped vertical bar chart as a standalone SVG document.
std::string bar_chart_svg(std::string_view title, std::span<const std::string> categories,
                          std::span<const BarSeries> series, std::string_view y_label);

}  // namespace skintone
