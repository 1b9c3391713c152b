#pragma once

#include "ibd/fock.hpp"
#include "ibd/kernels.hpp"
#include "ibd/sparse.hpp"
#include "ibd/vertex.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ibd {

struct AssemblyOptions {
    VertexContext ctx;
    double sigma = 0.0; // IR cutoff on the neutrino leg; 0 = none
    std::array<bool, 4> processes{true, true, true, true};
    double drop_rel = 1e-14; // drop |c| < drop_rel * max|c|
};

// Coefficients c_j(k1, k2, k3, k4) of the discrete monomials, including
// sqrt(w1 w2 w3 w4) and the cutoff factor on k4.
class AmplitudeTable {
  public:
    AmplitudeTable() = default;
    AmplitudeTable(const ModeGrid& g, const KernelSpec& spec, const AssemblyOptions& opt);

    cplx at(int process, int k1, int k2, int k3, int k4) const {
        return data_[static_cast<size_t>(process - 1)][index(process, k1, k2, k3, k4)];
    }
    bool enabled(int process) const { return !data_[static_cast<size_t>(process - 1)].empty(); }
    double max_abs() const { return max_abs_; }
    std::int64_t dropped() const { return dropped_; }
    std::int64_t unconverged() const { return unconverged_; }
    std::int64_t tuples() const { return tuples_; }

  private:
    size_t index(int process, int k1, int k2, int k3, int k4) const {
        const auto& d = dims_[static_cast<size_t>(process - 1)];
        return static_cast<size_t>(((static_cast<std::int64_t>(k4) * d[2] + k3) * d[1] + k2) * d[0] + k1);
    }
    std::array<std::array<int, 4>, 4> dims_{};
    std::array<std::vector<cplx>, 4> data_;
    double max_abs_ = 0.0;
    std::int64_t dropped_ = 0, unconverged_ = 0, tuples_ = 0;
};

struct AssemblyStats {
    std::int64_t transitions = 0; // nonzero monomial actions landing inside the basis
    std::int64_t leaked = 0;      // actions leaving the truncated basis
    double hermiticity_error = 0.0;
};

SparseOperator assemble_H0(const ModeGrid& g, const FockBasis& b);
SparseOperator assemble_HI(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps,
                           AssemblyStats* stats = nullptr);
SparseOperator assemble_HI(const ModeGrid& g, const FockBasis& b, const KernelSpec& spec, const AssemblyOptions& opt,
                           AssemblyStats* stats = nullptr);
// H0 + g HI
SparseOperator assemble_H(const SparseOperator& H0, const SparseOperator& HI, double g);

// The two pieces of [b(k4), H_I] acting on a basis: V1 = sum c_2 b*(3) b(2) b(1)
// and V2 = sum c_3 b*(3) b*(2) b*(1), with k4 held fixed. Built from the
// amplitude table directly, not from H_I.
SparseOperator pull_through_V1(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps, int k4);
SparseOperator pull_through_V2(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps, int k4);

struct RelativeBoundReport {
    int samples = 0;
    int violations = 0;
    double max_ratio = 0.0;      // ||HI psi|| / (K (C ||H0 psi|| + B ||psi||))
    double max_ratio_sqrt = 0.0; // ||HI psi|| / (2 C0 K ||(H0 + m_p)^(1/2) psi||), reported only
    bool pass = false;
};

RelativeBoundReport relative_bound_check(const SparseOperator& H0, const SparseOperator& HI, const ModelConstants& c,
                                         int trials, std::uint64_t seed);

} // namespace ibd
