#include "pstat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pstat/errors.hpp"

namespace pstat::numerics {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DomainError(fmt::format("matrix data has {} entries, expected {}x{}",
                                  data_.size(), rows, cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::leading_columns(std::size_t count) const {
  count = std::min(count, cols_);
  Matrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, c);
  }
  return out;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw DomainError("dimension mismatch in matrix-vector product");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * x[c];
    out[r] = s;
  }
  return out;
}

LeastSquaresResult least_squares(const Matrix& x, std::span<const double> y,
                                 std::span<const std::string> column_names) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (p == 0 || n < p) {
    throw InsufficientDataError(
        fmt::format("least squares needs n >= p >= 1 (n={}, p={})", n, p));
  }
  if (y.size() != n) throw DomainError("response length does not match design rows");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw DomainError("design matrix has non-finite entries");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("response has non-finite entries");
  }

  // Column-major working copy; Householder vectors overwrite the lower part.
  std::vector<std::vector<double>> a(p, std::vector<double>(n));
  double max_norm = 0.0;
  for (std::size_t c = 0; c < p; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      a[c][r] = x(r, c);
      s += a[c][r] * a[c][r];
    }
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  const double tol = kRankTolerance * max_norm;
  std::vector<double> qty(y.begin(), y.end());
  std::vector<double> diag(p);

  for (std::size_t j = 0; j < p; ++j) {
    auto& col = a[j];
    double sigma = 0.0;
    for (std::size_t r = j; r < n; ++r) sigma += col[r] * col[r];
    sigma = std::sqrt(sigma);
    if (!(sigma > tol)) {
      throw RankDeficiencyError(j, j < column_names.size() ? column_names[j] : std::string{});
    }
    const double alpha = col[j] > 0 ? -sigma : sigma;
    // v = col[j..] - alpha e_1, stored in place; beta = 2 / v'v.
    col[j] -= alpha;
    const double vtv = 2.0 * sigma * (sigma + std::abs(col[j] + alpha) );
    diag[j] = alpha;
    auto reflect = [&](std::vector<double>& target) {
      double dot = 0.0;
      for (std::size_t r = j; r < n; ++r) dot += col[r] * target[r];
      const double scale = 2.0 * dot / vtv;
      for (std::size_t r = j; r < n; ++r) target[r] -= scale * col[r];
    };
    for (std::size_t c = j + 1; c < p; ++c) reflect(a[c]);
    reflect(qty);
  }

  // Back substitution R beta = (Q'y)[0..p).
  std::vector<double> beta(p);
  for (std::size_t jj = p; jj-- > 0;) {
    double s = qty[jj];
    for (std::size_t c = jj + 1; c < p; ++c) s -= a[c][jj] * beta[c];
    beta[jj] = s / diag[jj];
  }

  LeastSquaresResult out;
  out.fitted = multiply(x, beta);
  out.beta = std::move(beta);
  out.rank = p;
  return out;
}

namespace {

double log_gamma(double v) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(v, &sign);
#else
  return std::lgamma(v);
#endif
}

constexpr int kMaxIterations = 300;
constexpr double kRelTolerance = 1e-12;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kRelTolerance) return h;
  }
  throw NumericalError(fmt::format(
      "incomplete beta continued fraction did not converge in {} iterations "
      "(a={}, b={}, x={})", kMaxIterations, a, b, x));
}

}  // namespace

double incomplete_beta(double a, double b, double x, double complement) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (complement == 0.0) return 1.0;
  const double log_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                           a * std::log(x) + b * std::log(complement);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, complement) / b;
}

double incomplete_beta(double a, double b, double x) {
  return incomplete_beta(a, b, x, 1.0 - x);
}

double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("F distribution needs d1, d2 > 0");
  if (std::isnan(f) || f < 0.0) throw DomainError("F statistic must be >= 0");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double denom = d2 + d1 * f;
  const double x = d2 / denom;
  const double complement = d1 * f / denom;
  return std::clamp(incomplete_beta(d2 / 2.0, d1 / 2.0, x, complement), 0.0, 1.0);
}

double f_cdf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("F distribution needs d1, d2 > 0");
  if (std::isnan(f) || f < 0.0) throw DomainError("F statistic must be >= 0");
  if (f == 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  const double denom = d2 + d1 * f;
  return std::clamp(incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / denom, d2 / denom),
                    0.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, relative error about 1.15e-9.
double probit_initial(double q) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (q < low) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
           ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  const double t = q - 0.5;
  const double r = t * t;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * t /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Valid for q <= 0.5, where Phi(z) - q has no cancellation problem.
double probit_lower(double q) {
  double z = probit_initial(q);
  // One Halley step against the erfc based CDF.
  const double e = normal_cdf(z) - q;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * z * z);
  z -= u / (1.0 + 0.5 * z * u);
  return z;
}

}  // namespace

double probit(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError(fmt::format("probit needs q in (0,1), got {}", q));
  }
  if (q == 0.5) return 0.0;
  return q < 0.5 ? probit_lower(q) : -probit_lower(1.0 - q);
}

}  // namespace pstat::numerics
