#ifndef NEARQUAD_SOLVER_HPP
#define NEARQUAD_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nearquad/errors.hpp"

namespace nearquad {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw contract_violation("DenseMatrix: entries length " + std::to_string(data_.size()) +
                               " does not match " + std::to_string(rows_) + "x" +
                               std::to_string(cols_));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> entries() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SolveReport {
  std::vector<double> solution;
  double residual_norm = 0.0;  // ||A w - b||_2
  int rank = 0;
};

/// Minimum-norm least-squares solution of A w = b.
///
/// Covers both shapes: overdetermined systems get the least-squares fit,
/// underdetermined ones the smallest-norm exact solution, and rank-deficient
/// ones the smallest-norm minimiser.  Singular values below
/// max(rows, cols) * 2^-52 * sigma_max are discarded.
inline SolveReport solve_min_norm_lsq(const DenseMatrix& a, std::span<const double> b) {
  if (a.rows() == 0 || a.cols() == 0) throw contract_violation("solve_min_norm_lsq: empty matrix");
  if (b.size() != a.rows())
    throw contract_violation("solve_min_norm_lsq: right-hand side has " + std::to_string(b.size()) +
                             " entries, matrix has " + std::to_string(a.rows()) + " rows");
  for (double v : a.entries())
    if (!std::isfinite(v)) throw contract_violation("solve_min_norm_lsq: non-finite matrix entry");
  for (double v : b)
    if (!std::isfinite(v)) throw contract_violation("solve_min_norm_lsq: non-finite right-hand side");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> am(a.entries().data(), static_cast<Eigen::Index>(a.rows()),
                                      static_cast<Eigen::Index>(a.cols()));
  const Eigen::Map<const Eigen::VectorXd> bm(b.data(), static_cast<Eigen::Index>(b.size()));

  const Eigen::MatrixXd dense = am;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(static_cast<double>(std::max(a.rows(), a.cols())) *
                   std::numeric_limits<double>::epsilon());

  const Eigen::VectorXd w = svd.solve(bm);
  SolveReport report;
  report.solution.assign(w.data(), w.data() + w.size());
  report.residual_norm = (dense * w - bm).norm();
  report.rank = static_cast<int>(svd.rank());
  return report;
}

}  // namespace nearquad

#endif  // NEARQUAD_SOLVER_HPP
