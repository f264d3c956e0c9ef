#ifndef PSTAT_NUMERICS_HPP_
#define PSTAT_NUMERICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pstat::numerics {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // Throws DomainError when data.size() != rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  // The first `count` columns.
  Matrix leading_columns(std::size_t count) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> multiply(const Matrix& a, std::span<const double> x);

struct LeastSquaresResult {
  std::vector<double> beta;
  std::vector<double> fitted;
  std::size_t rank = 0;
};

// Minimizes ||y - X beta||^2 with a Householder QR factorization taken in
// column order. A column whose distance to the span of the columns before it
// is at most 1e-10 times the largest column norm makes the problem rank
// deficient and raises RankDeficiencyError naming that column.
//
// Preconditions: n >= p >= 1, all entries finite, y.size() == n.
LeastSquaresResult least_squares(const Matrix& x, std::span<const double> y,
                                 std::span<const std::string> column_names = {});

inline constexpr double kRankTolerance = 1e-10;

// Regularized incomplete beta I_x(a, b). `complement` must equal 1 - x; it is
// passed separately so callers can supply it without cancellation.
double incomplete_beta(double a, double b, double x, double complement);
double incomplete_beta(double a, double b, double x);

// Upper tail Pr(F > f) of the F distribution with (d1, d2) degrees of
// freedom. Continued fraction to 1e-12 relative, at most 300 iterations;
// throws NumericalError when that budget is not enough.
double f_sf(double f, double d1, double d2);
double f_cdf(double f, double d1, double d2);

// Standard normal CDF.
double normal_cdf(double z);

// Standard normal quantile for q in (0,1); DomainError otherwise.
double probit(double q);

}  // namespace pstat::numerics

#endif  // PSTAT_NUMERICS_HPP_
