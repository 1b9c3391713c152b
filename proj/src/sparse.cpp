#include "ibd/sparse.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ibd {

SparseOperator::SparseOperator(std::int64_t dim) : dim_(dim), mat_(dim, dim) {}

SparseOperator::SparseOperator(std::int64_t dim, const std::vector<Triplet>& entries, bool hermitian)
    : dim_(dim), mat_(dim, dim), hermitian_(hermitian) {
    std::vector<Eigen::Triplet<cplx, std::int64_t>> t;
    t.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim)
            throw std::out_of_range("SparseOperator: entry outside dimension");
        t.emplace_back(e.row, e.col, e.value);
    }
    mat_.setFromTriplets(t.begin(), t.end());
    mat_.makeCompressed();
}

double SparseOperator::hermiticity_error() const {
    SpMat d = mat_ - SpMat(mat_.adjoint());
    double m = 0.0;
    for (std::int64_t k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

std::vector<Triplet> SparseOperator::entries() const {
    std::vector<Triplet> out;
    out.reserve(static_cast<size_t>(mat_.nonZeros()));
    for (std::int64_t k = 0; k < mat_.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat_, k); it; ++it) out.push_back({it.row(), it.col(), it.value()});
    return out;
}

SparseOperator SparseOperator::operator+(const SparseOperator& o) const {
    SparseOperator r(dim_);
    r.mat_ = mat_ + o.mat_;
    r.hermitian_ = hermitian_ && o.hermitian_;
    return r;
}

SparseOperator SparseOperator::operator-(const SparseOperator& o) const {
    SparseOperator r(dim_);
    r.mat_ = mat_ - o.mat_;
    r.hermitian_ = hermitian_ && o.hermitian_;
    return r;
}

SparseOperator SparseOperator::operator*(cplx s) const {
    SparseOperator r(dim_);
    r.mat_ = mat_ * s;
    r.hermitian_ = hermitian_ && s.imag() == 0.0;
    return r;
}

SparseOperator SparseOperator::operator*(const SparseOperator& o) const {
    SparseOperator r(dim_);
    r.mat_ = (mat_ * o.mat_).pruned();
    return r;
}

double SparseOperator::frobenius() const { return mat_.norm(); }

void SparseOperator::dump(const std::string& path, const std::string& metadata) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write operator dump to " + path);
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(metadata)));
    f << "# ibd-operator v1\n";
    f << "# dim " << dim_ << " nnz " << mat_.nonZeros() << " meta_hash " << hash << "\n";
    f << "# row col re im\n";
    f << std::setprecision(17);
    for (const auto& e : entries()) f << e.row << ' ' << e.col << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace ibd
