#pragma once

#include <span>
#include <string>
#include <vector>

namespace robinfsi {

struct Triplet {
  int row, col;
  double value;
};

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_offsets,
               std::vector<int> col_indices, std::vector<double> values);

  /// Sums duplicate entries; always includes diagonal slots so constraint
  /// elimination can write them later.
  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<Triplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  std::span<const int> row_offsets() const { return row_offsets_; }
  std::span<const int> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values_mutable() { return values_; }

  double coeff(int i, int j) const;  // 0 if absent

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;
  /// y += s * A x
  void multiply_add(std::span<const double> x, std::span<double> y,
                    double s = 1.0) const;

  SparseMatrix transposed() const;
  void scale(double s);

  /// max_ij |A_ij - A_ji| (pattern-aware), for symmetry assertions.
  double symmetry_gap() const;

private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

/// Accumulates element contributions and block layouts before compression.
class TripletList {
public:
  void reserve(size_t n) { t_.reserve(n); }
  void add(int i, int j, double v) { t_.push_back({i, j, v}); }
  void add_block(const SparseMatrix& a, int row0, int col0, double scale = 1.0);
  void add_block_transposed(const SparseMatrix& a, int row0, int col0,
                            double scale = 1.0);
  SparseMatrix compress(int rows, int cols) &&;

private:
  std::vector<Triplet> t_;
};

// vector helpers
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double a, std::span<const double> x, std::span<double> y);

void write_matrix_market(const SparseMatrix& a, const std::string& path);

}  // namespace robinfsi
