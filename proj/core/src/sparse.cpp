#include "robinfsi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "robinfsi/errors.hpp"

namespace robinfsi {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_offsets,
                           std::vector<int> col_indices,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (static_cast<int>(row_offsets_.size()) != rows_ + 1 ||
      col_indices_.size() != values_.size())
    fail(ErrorCode::DimensionMismatch, "inconsistent CSR arrays");
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> t) {
  for (int d = 0; d < std::min(rows, cols); ++d) t.push_back({d, d, 0.0});
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(rows + 1, 0);
  m.col_indices_.reserve(t.size());
  m.values_.reserve(t.size());
  size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    while (k < t.size() && t[k].row == i) {
      const int c = t[k].col;
      double v = 0.0;
      while (k < t.size() && t[k].row == i && t[k].col == c) v += t[k++].value;
      m.col_indices_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_offsets_[i + 1] = static_cast<int>(m.col_indices_.size());
  }
  if (k != t.size())
    fail(ErrorCode::DimensionMismatch, "triplet outside matrix shape");
  return m;
}

double SparseMatrix::coeff(int i, int j) const {
  for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
    if (col_indices_[k] == j) return values_[k];
  return 0.0;
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    fail(ErrorCode::DimensionMismatch, "spmv shape mismatch");
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * x[col_indices_[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  multiply(x, y);
  return y;
}

void SparseMatrix::multiply_add(std::span<const double> x, std::span<double> y,
                                double s) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    fail(ErrorCode::DimensionMismatch, "spmv shape mismatch");
  for (int i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      acc += values_[k] * x[col_indices_[k]];
    y[i] += s * acc;
  }
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      t.push_back({col_indices_[k], i, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

void SparseMatrix::scale(double s) {
  for (auto& v : values_) v *= s;
}

double SparseMatrix::symmetry_gap() const {
  double gap = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      gap = std::max(gap, std::abs(values_[k] - coeff(col_indices_[k], i)));
  return gap;
}

void TripletList::add_block(const SparseMatrix& a, int row0, int col0,
                            double scale) {
  const auto ro = a.row_offsets();
  const auto ci = a.col_indices();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = ro[i]; k < ro[i + 1]; ++k)
      t_.push_back({row0 + i, col0 + ci[k], scale * v[k]});
}

void TripletList::add_block_transposed(const SparseMatrix& a, int row0,
                                       int col0, double scale) {
  const auto ro = a.row_offsets();
  const auto ci = a.col_indices();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = ro[i]; k < ro[i + 1]; ++k)
      t_.push_back({row0 + ci[k], col0 + i, scale * v[k]});
}

SparseMatrix TripletList::compress(int rows, int cols) && {
  return SparseMatrix::from_triplets(rows, cols, std::move(t_));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "axpy");
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream f(path);
  f.precision(17);
  f << "%%MatrixMarket matrix coordinate real general\n";
  f << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
  const auto ro = a.row_offsets();
  const auto ci = a.col_indices();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = ro[i]; k < ro[i + 1]; ++k)
      f << i + 1 << " " << ci[k] + 1 << " " << v[k] << "\n";
}

}  // namespace robinfsi
