#ifndef PSTAT_ANOVA_HPP_
#define PSTAT_ANOVA_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pstat/corpus.hpp"
#include "pstat/numerics.hpp"

namespace pstat::anova {

// Terms enter the model in the listed order: main terms first, then the
// pairwise products. Type-I sums of squares depend on this order.
struct ModelSpec {
  std::vector<std::size_t> main_terms;  // attribute indices
  std::vector<std::pair<std::size_t, std::size_t>> interaction_terms;
  bool include_intercept = true;

  // All nine attributes in canonical order, no interactions.
  static ModelSpec canonical();
  // Parses a comma separated list of attribute names, and optional
  // "A:B,C:D" interaction pairs. Empty `order` means the canonical order.
  static ModelSpec parse(std::string_view order, std::string_view interactions);

  std::size_t num_terms() const { return main_terms.size() + interaction_terms.size(); }
  std::vector<std::string> term_names() const;
  // Throws ConfigError on duplicates, empty main terms, or an interaction
  // factor that is not a main term.
  void validate() const;
};

struct AnovaRow {
  std::string term;
  std::size_t df = 1;
  double sum_sq = 0.0;
  double mean_sq = 0.0;
  double f_value = 0.0;
  double p_value = 1.0;
  std::string signif_code;
};

struct ResidualRow {
  std::size_t df = 0;
  double sum_sq = 0.0;
  double mean_sq = 0.0;
};

// Whole-model test: F = (SS_R / k) / MS_E on (k, n - k - 1) df.
struct OverallTest {
  double ss_regression = 0.0;
  std::size_t df = 0;
  double mean_sq = 0.0;
  double f_value = 0.0;
  double p_value = 1.0;
};

struct AnovaTable {
  std::vector<AnovaRow> rows;
  ResidualRow residual;
  double ss_total = 0.0;
  std::size_t n = 0;
  OverallTest overall;
};

struct FitDiagnostics {
  std::vector<std::string> coefficient_names;  // "(Intercept)" first when present
  std::vector<double> coefficients;
  std::vector<double> residuals;
  double sigma2_hat = 0.0;  // MS_E
};

struct AnovaResult {
  AnovaTable table;
  FitDiagnostics diagnostics;
};

// "***" p <= 0.001, "**" <= 0.01, "*" <= 0.05, "." <= 0.1, "" otherwise.
std::string signif_code(double p);

inline constexpr std::string_view kSignifLegend =
    "Signif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1";

// Design matrix [1 | main columns | interaction products], in spec order.
numerics::Matrix design_matrix(const LabeledDataset& dataset, const ModelSpec& spec);
std::vector<std::string> design_column_names(const ModelSpec& spec);

// Sequential (Type-I) ANOVA of the linear probability model label ~ terms.
// Each term's sum of squares is the increase in regression sum of squares
// when it enters after the terms before it; F uses the full model's MS_E.
//
// Throws InsufficientDataError when n <= k + 1, RankDeficiencyError when the
// design is not full rank, DegenerateFitError when MS_E is zero.
AnovaResult anova(const LabeledDataset& dataset, const ModelSpec& spec);

// Same, for an arbitrary response and an explicit design whose first column
// is the intercept (when spec-free callers need it, e.g. tests).
AnovaResult anova(const numerics::Matrix& design, std::span<const double> y,
                  const std::vector<std::string>& term_names, bool has_intercept);

inline constexpr double kSignificanceFloor = 1e-300;

struct SignificanceVector {
  std::vector<std::string> terms;
  std::vector<double> values;

  bool operator==(const SignificanceVector&) const = default;
};

// p-values of the term rows in table order, zeros floored to 1e-300.
SignificanceVector significance_vector(const AnovaTable& table);

nlohmann::json to_json(const SignificanceVector& v);
SignificanceVector significance_vector_from_json(const nlohmann::json& doc);

struct QqPoint {
  double theoretical = 0.0;
  double sample = 0.0;
};

// Standardized residuals (divided by sqrt(MS_E)) sorted ascending against
// normal quantiles at plotting positions (i - 0.5) / n.
std::vector<QqPoint> qq_data(const FitDiagnostics& diagnostics);

// Column-aligned rendering in the style of R's anova() print, with the
// significance legend.
std::string render_text(const AnovaTable& table);
nlohmann::json to_json(const AnovaTable& table);

}  // namespace pstat::anova

#endif  // PSTAT_ANOVA_HPP_
