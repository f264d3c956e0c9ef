#include "pstat/anova.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "pstat/errors.hpp"

namespace pstat::anova {

using numerics::Matrix;

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : s) {
    if (c == sep) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

double sum_sq_about(std::span<const double> v, double center) {
  double s = 0.0;
  for (double x : v) s += (x - center) * (x - center);
  return s;
}

}  // namespace

ModelSpec ModelSpec::canonical() {
  ModelSpec spec;
  spec.main_terms.resize(kNumAttributes);
  std::iota(spec.main_terms.begin(), spec.main_terms.end(), std::size_t{0});
  return spec;
}

ModelSpec ModelSpec::parse(std::string_view order, std::string_view interactions) {
  ModelSpec spec;
  const auto names = split(order, ',');
  if (names.empty()) {
    spec = canonical();
  } else {
    for (const auto& name : names) spec.main_terms.push_back(require_attribute(name));
  }
  for (const auto& pair : split(interactions, ',')) {
    const auto factors = split(pair, ':');
    if (factors.size() != 2) {
      throw ConfigError("interaction '" + pair + "' must have the form A:B");
    }
    spec.interaction_terms.emplace_back(require_attribute(factors[0]),
                                        require_attribute(factors[1]));
  }
  spec.validate();
  return spec;
}

std::vector<std::string> ModelSpec::term_names() const {
  std::vector<std::string> out;
  for (auto idx : main_terms) out.emplace_back(kAttributeNames.at(idx));
  for (auto [a, b] : interaction_terms) {
    out.push_back(std::string(kAttributeNames.at(a)) + ":" +
                  std::string(kAttributeNames.at(b)));
  }
  return out;
}

void ModelSpec::validate() const {
  if (main_terms.empty()) throw ConfigError("model needs at least one main term");
  std::set<std::size_t> seen;
  for (auto idx : main_terms) {
    if (idx >= kNumAttributes) throw ConfigError("attribute index out of range");
    if (!seen.insert(idx).second) {
      throw ConfigError("duplicate term " + std::string(kAttributeNames[idx]));
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (auto [a, b] : interaction_terms) {
    if (!seen.count(a) || !seen.count(b)) {
      throw ConfigError("interaction " + std::string(kAttributeNames.at(a)) + ":" +
                        std::string(kAttributeNames.at(b)) +
                        " uses a factor that is not a main term");
    }
    if (a == b) throw ConfigError("interaction of a term with itself");
    if (!pairs.insert({std::min(a, b), std::max(a, b)}).second) {
      throw ConfigError("duplicate interaction term");
    }
  }
}

std::string signif_code(double p) {
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  if (p <= 0.1) return ".";
  return "";
}

std::vector<std::string> design_column_names(const ModelSpec& spec) {
  std::vector<std::string> names;
  if (spec.include_intercept) names.emplace_back("(Intercept)");
  for (auto& t : spec.term_names()) names.push_back(std::move(t));
  return names;
}

Matrix design_matrix(const LabeledDataset& dataset, const ModelSpec& spec) {
  spec.validate();
  const std::size_t offset = spec.include_intercept ? 1 : 0;
  Matrix x(dataset.size(), offset + spec.num_terms());
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const auto& s = dataset.rows[r].scores;
    std::size_t c = 0;
    if (spec.include_intercept) x(r, c++) = 1.0;
    for (auto idx : spec.main_terms) x(r, c++) = s[idx];
    for (auto [a, b] : spec.interaction_terms) x(r, c++) = s[a] * s[b];
  }
  return x;
}

AnovaResult anova(const LabeledDataset& dataset, const ModelSpec& spec) {
  const Matrix x = design_matrix(dataset, spec);
  std::vector<double> y(dataset.size());
  for (std::size_t r = 0; r < dataset.size(); ++r) y[r] = dataset.rows[r].label;
  return anova(x, y, spec.term_names(), spec.include_intercept);
}

AnovaResult anova(const Matrix& design, std::span<const double> y,
                  const std::vector<std::string>& term_names, bool has_intercept) {
  const std::size_t n = design.rows();
  const std::size_t offset = has_intercept ? 1 : 0;
  const std::size_t k = term_names.size();
  if (design.cols() != k + offset) {
    throw DomainError("design matrix columns do not match the term list");
  }
  if (k == 0) throw ConfigError("model needs at least one term");
  if (n <= k + offset) {
    throw InsufficientDataError(fmt::format(
        "ANOVA needs more observations than parameters (n={}, parameters={})", n,
        k + offset));
  }
  if (y.size() != n) throw DomainError("response length does not match design rows");

  std::vector<std::string> col_names;
  if (has_intercept) col_names.emplace_back("(Intercept)");
  col_names.insert(col_names.end(), term_names.begin(), term_names.end());

  const auto full = numerics::least_squares(design, y, col_names);

  const double mean = has_intercept ? std::accumulate(y.begin(), y.end(), 0.0) / n : 0.0;
  const double ss_total = sum_sq_about(y, mean);
  std::vector<double> residuals(n);
  for (std::size_t i = 0; i < n; ++i) residuals[i] = y[i] - full.fitted[i];
  const double ss_error = sum_sq_about(residuals, 0.0);
  const double ss_scale = sum_sq_about(y, 0.0);
  if (ss_scale == 0.0 || ss_error <= 1e-20 * ss_scale) {
    throw DegenerateFitError("residual sum of squares is zero; F statistics are undefined");
  }

  const std::size_t df_error = n - k - offset;
  const double ms_error = ss_error / static_cast<double>(df_error);

  AnovaResult result;
  auto& table = result.table;
  table.n = n;
  table.ss_total = ss_total;
  table.residual = {df_error, ss_error, ms_error};

  double previous_ssr = 0.0;
  double term_total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double ssr;
    if (i + 1 == k) {
      ssr = sum_sq_about(full.fitted, mean);
    } else {
      const auto nested = numerics::least_squares(design.leading_columns(offset + i + 1), y,
                                                  col_names);
      ssr = sum_sq_about(nested.fitted, mean);
    }
    AnovaRow row;
    row.term = term_names[i];
    row.df = 1;
    row.sum_sq = std::max(0.0, ssr - previous_ssr);
    row.mean_sq = row.sum_sq;
    row.f_value = row.mean_sq / ms_error;
    row.p_value = numerics::f_sf(row.f_value, 1.0, static_cast<double>(df_error));
    row.signif_code = signif_code(row.p_value);
    table.rows.push_back(std::move(row));
    term_total += table.rows.back().sum_sq;
    previous_ssr = ssr;
  }

  if (std::abs(term_total + ss_error - ss_total) > 1e-8 * ss_total) {
    throw NumericalError(fmt::format(
        "sum of squares decomposition failed: terms {} + error {} != total {}", term_total,
        ss_error, ss_total));
  }

  auto& overall = table.overall;
  overall.ss_regression = previous_ssr;
  overall.df = k;
  overall.mean_sq = previous_ssr / static_cast<double>(k);
  overall.f_value = overall.mean_sq / ms_error;
  overall.p_value = numerics::f_sf(overall.f_value, static_cast<double>(k),
                                   static_cast<double>(df_error));

  auto& diag = result.diagnostics;
  diag.coefficient_names = std::move(col_names);
  diag.coefficients = full.beta;
  diag.residuals = std::move(residuals);
  diag.sigma2_hat = ms_error;
  return result;
}

SignificanceVector significance_vector(const AnovaTable& table) {
  SignificanceVector v;
  for (const auto& row : table.rows) {
    v.terms.push_back(row.term);
    v.values.push_back(std::max(row.p_value, kSignificanceFloor));
  }
  return v;
}

nlohmann::json to_json(const SignificanceVector& v) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < v.terms.size(); ++i) {
    arr.push_back({{"term", v.terms[i]}, {"p_value", v.values[i]}});
  }
  return arr;
}

SignificanceVector significance_vector_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw SchemaError("significance vector must be a JSON array");
  SignificanceVector v;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("term") || !item.contains("p_value") ||
        !item["term"].is_string() || !item["p_value"].is_number()) {
      throw SchemaError(
          "significance vector entries must be objects {\"term\": string, \"p_value\": number}");
    }
    v.terms.push_back(item["term"].get<std::string>());
    v.values.push_back(item["p_value"].get<double>());
  }
  return v;
}

std::vector<QqPoint> qq_data(const FitDiagnostics& diagnostics) {
  const std::size_t n = diagnostics.residuals.size();
  if (n < 3) throw InsufficientDataError("Q-Q data needs at least 3 residuals");
  if (!(diagnostics.sigma2_hat > 0.0)) {
    throw DegenerateFitError("MS_E is zero; residuals cannot be standardized");
  }
  std::vector<double> sorted = diagnostics.residuals;
  std::sort(sorted.begin(), sorted.end());
  const double scale = std::sqrt(diagnostics.sigma2_hat);
  std::vector<QqPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].theoretical = numerics::probit((static_cast<double>(i) + 0.5) / n);
    out[i].sample = sorted[i] / scale;
  }
  return out;
}

namespace {

std::string format_p(double p) {
  if (p < 1e-4) return fmt::format("{:.2e}", p);
  return fmt::format("{:.4f}", p);
}

}  // namespace

std::string render_text(const AnovaTable& table) {
  struct Line {
    std::string term, df, ss, ms, f, p, code;
  };
  std::vector<Line> lines;
  lines.push_back({"", "Df", "Sum Sq", "Mean Sq", "F value", "Pr(>F)", ""});
  for (const auto& r : table.rows) {
    lines.push_back({r.term, std::to_string(r.df), fmt::format("{:.2f}", r.sum_sq),
                     fmt::format("{:.2f}", r.mean_sq), fmt::format("{:.2f}", r.f_value),
                     format_p(r.p_value), r.signif_code});
  }
  lines.push_back({"Residuals", std::to_string(table.residual.df),
                   fmt::format("{:.2f}", table.residual.sum_sq),
                   fmt::format("{:.2f}", table.residual.mean_sq), "", "", ""});

  std::size_t w[6] = {};
  for (const auto& l : lines) {
    const std::string* cols[6] = {&l.term, &l.df, &l.ss, &l.ms, &l.f, &l.p};
    for (int i = 0; i < 6; ++i) w[i] = std::max(w[i], cols[i]->size());
  }

  std::ostringstream out;
  out << "Analysis of Variance Table\n\nResponse: label\n";
  for (const auto& l : lines) {
    std::string s = fmt::format("{:<{}} {:>{}} {:>{}} {:>{}} {:>{}} {:>{}}", l.term, w[0],
                                l.df, w[1], l.ss, w[2], l.ms, w[3], l.f, w[4], l.p, w[5]);
    if (!l.code.empty()) s += " " + l.code;
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  }
  out << "---\n" << kSignifLegend << '\n';
  out << fmt::format("\nF-statistic: {:.2f} on {} and {} DF, p-value: {}\n",
                     table.overall.f_value, table.overall.df, table.residual.df,
                     format_p(table.overall.p_value));
  return out.str();
}

nlohmann::json to_json(const AnovaTable& table) {
  nlohmann::json doc;
  doc["n"] = table.n;
  doc["ss_total"] = table.ss_total;
  auto rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"term", r.term},
                    {"df", r.df},
                    {"sum_sq", r.sum_sq},
                    {"mean_sq", r.mean_sq},
                    {"f_value", r.f_value},
                    {"p_value", r.p_value},
                    {"signif_code", r.signif_code}});
  }
  doc["rows"] = std::move(rows);
  doc["residuals"] = {{"df", table.residual.df},
                      {"sum_sq", table.residual.sum_sq},
                      {"mean_sq", table.residual.mean_sq}};
  doc["overall"] = {{"ss_regression", table.overall.ss_regression},
                    {"df", table.overall.df},
                    {"mean_sq", table.overall.mean_sq},
                    {"f_value", table.overall.f_value},
                    {"p_value", table.overall.p_value}};
  return doc;
}

}  // namespace pstat::anova
