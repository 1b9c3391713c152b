#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ibd {

using cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t>;

struct Triplet {
    std::int64_t row, col;
    cplx value;
};

// Square operator over a FockBasis, stored compressed (duplicates summed).
class SparseOperator {
  public:
    SparseOperator() = default;
    explicit SparseOperator(std::int64_t dim);
    SparseOperator(std::int64_t dim, const std::vector<Triplet>& entries, bool hermitian);

    std::int64_t dim() const { return dim_; }
    std::int64_t nnz() const { return mat_.nonZeros(); }
    bool hermitian() const { return hermitian_; }
    const SpMat& matrix() const { return mat_; }

    VecC apply(const VecC& x) const { return mat_ * x; }
    // max |A - A^dagger| over entries
    double hermiticity_error() const;
    cplx at(std::int64_t r, std::int64_t c) const { return mat_.coeff(r, c); }
    Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(mat_); }
    std::vector<Triplet> entries() const;

    SparseOperator operator+(const SparseOperator& o) const;
    SparseOperator operator-(const SparseOperator& o) const;
    SparseOperator operator*(cplx s) const;
    SparseOperator operator*(const SparseOperator& o) const; // matrix product
    double frobenius() const;

    // Coordinate text dump: header lines starting with '#', then "row col re im".
    void dump(const std::string& path, const std::string& metadata) const;

  private:
    std::int64_t dim_ = 0;
    SpMat mat_;
    bool hermitian_ = false;
};

std::uint64_t fnv1a(const std::string& s);

} // namespace ibd
