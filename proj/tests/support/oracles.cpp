#include "oracles.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <unistd.h>

namespace pstat::testing {

Dense transpose(const Dense& a) {
  if (a.empty()) return {};
  Dense t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Dense matmul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size(), m = b[0].size(), inner = b.size();
  Dense c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Dense invert(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-300) throw std::runtime_error("singular matrix");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Dense hat_matrix(const Dense& x) {
  const Dense xt = transpose(x);
  return matmul(matmul(x, invert(matmul(xt, x))), xt);
}

double quadratic_form(const Dense& a, const std::vector<double>& y) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += static_cast<long double>(y[i]) * a[i][j] * y[j];
  return static_cast<double>(s);
}

ExplicitSs explicit_sums_of_squares(const Dense& x, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const Dense h = hat_matrix(x);
  Dense centering(n, std::vector<double>(n, -1.0 / static_cast<double>(n)));
  Dense h_centered = h;
  Dense residual_maker(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    centering[i][i] += 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      h_centered[i][j] -= 1.0 / static_cast<double>(n);
      residual_maker[i][j] = (i == j ? 1.0 : 0.0) - h[i][j];
    }
  }
  return {quadratic_form(centering, y), quadratic_form(h_centered, y),
          quadratic_form(residual_maker, y)};
}

namespace {

double f_density(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double log_norm = std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2) +
                          (d1 / 2) * std::log(d1 / d2);
  return std::exp(log_norm + (d1 / 2 - 1) * std::log(x) -
                  ((d1 + d2) / 2) * std::log1p(d1 * x / d2));
}

}  // namespace

double f_sf_quadrature(double f, double d1, double d2) {
  auto density = [&](double x) { return f_density(x, d1, d2); };
  if (f <= 0.0) return 1.0;
  // Whichever tail is smaller is integrated directly; the other is its complement.
  boost::math::quadrature::tanh_sinh<double> finite;
  const double lower = finite.integrate(density, 0.0, f, 1e-14);
  if (lower < 0.5) return 1.0 - lower;
  boost::math::quadrature::exp_sinh<double> infinite;
  return infinite.integrate([&](double t) { return density(f + t); }, 0.0,
                            std::numeric_limits<double>::infinity(), 1e-14);
}

double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double probit_bisection(double q) {
  // Upper half by symmetry, so the tail mass is never rounded against 1.
  if (q > 0.5) return -probit_bisection(1.0 - q);
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LabeledDataset random_dataset(std::size_t n, double p1, double shift, std::uint64_t seed,
                              std::string name) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.15);
  LabeledDataset ds;
  ds.name = std::move(name);
  for (std::size_t i = 0; i < n; ++i) {
    DatasetRow row;
    row.id = "r" + std::to_string(i);
    row.label = unit(gen) < p1 ? 1 : 0;
    for (auto& s : row.scores) {
      s = std::clamp(0.3 + (row.label ? shift : 0.0) + noise(gen), 0.0, 1.0);
    }
    ds.rows.push_back(row);
  }
  return ds;
}

LabeledDataset make_dataset(const std::vector<ScoreVector>& points, const std::vector<int>& labels,
                            std::string name) {
  LabeledDataset ds;
  ds.name = std::move(name);
  for (std::size_t i = 0; i < points.size(); ++i) {
    ds.rows.push_back({"p" + std::to_string(i), points[i], labels[i]});
  }
  return ds;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("pstat-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace pstat::testing
