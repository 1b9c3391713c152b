#include "ibd/hamiltonian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ibd {

AmplitudeTable::AmplitudeTable(const ModeGrid& g, const KernelSpec& spec, const AssemblyOptions& opt) {
    for (int j = 1; j <= 4; ++j) {
        if (!opt.processes[static_cast<size_t>(j - 1)]) continue;
        const auto sp = process_species(j);
        auto& d = dims_[static_cast<size_t>(j - 1)];
        for (int l = 0; l < 4; ++l) d[static_cast<size_t>(l)] = g.count(sp[static_cast<size_t>(l)]);
        auto& v = data_[static_cast<size_t>(j - 1)];
        v.assign(static_cast<size_t>(d[0]) * d[1] * d[2] * d[3], cplx(0.0));
        for (int k4 = 0; k4 < d[3]; ++k4) {
            const Mode& m4 = g.at(sp[3], k4);
            const double cut = opt.sigma > 0 ? ir_cutoff_factor(opt.sigma, m4.p) : 1.0;
            if (cut == 0.0) continue;
            for (int k3 = 0; k3 < d[2]; ++k3) {
                const Mode& m3 = g.at(sp[2], k3);
                for (int k2 = 0; k2 < d[1]; ++k2) {
                    const Mode& m2 = g.at(sp[1], k2);
                    for (int k1 = 0; k1 < d[0]; ++k1) {
                        const Mode& m1 = g.at(sp[0], k1);
                        OverlapResult info;
                        const cplx a = amplitude(j, m1.charged(), m2.charged(), m3.neutron(), m4.p, spec, opt.ctx, &info);
                        ++tuples_;
                        if (!info.converged) ++unconverged_;
                        const double w = std::sqrt(m1.weight * m2.weight * m3.weight * m4.weight);
                        v[index(j, k1, k2, k3, k4)] = a * w * cut;
                    }
                }
            }
        }
        for (const auto& c : v) max_abs_ = std::max(max_abs_, std::abs(c));
    }
    const double floor = opt.drop_rel * max_abs_;
    for (auto& v : data_)
        for (auto& c : v)
            if (c != 0.0 && std::abs(c) < floor) {
                c = 0.0;
                ++dropped_;
            }
}

SparseOperator assemble_H0(const ModeGrid& g, const FockBasis& b) {
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(b.size()));
    for (std::int64_t i = 0; i < b.size(); ++i) {
        double e = 0.0;
        for (int s = 0; s < kNumSpecies; ++s) {
            std::uint64_t w = b[i].occ[s];
            while (w) {
                const int k = std::countr_zero(w);
                e += g.at(static_cast<Species>(s), k).energy;
                w &= w - 1;
            }
        }
        if (e != 0.0) t.push_back({i, i, cplx(e, 0.0)});
    }
    return SparseOperator(b.size(), t, true);
}

SparseOperator assemble_HI(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps, AssemblyStats* stats) {
    std::vector<Triplet> t;
    AssemblyStats st;
    for (std::int64_t i = 0; i < b.size(); ++i) {
        for (int j = 1; j <= 4; ++j) {
            if (!amps.enabled(j)) continue;
            for_each_transition(g, b[i], j, [&](const std::array<int, 4>& k, const FockState& target, int sign) {
                const cplx c = amps.at(j, k[0], k[1], k[2], k[3]);
                if (c == 0.0) return;
                const std::int64_t r = b.find(target);
                if (r < 0) {
                    ++st.leaked;
                    return;
                }
                ++st.transitions;
                t.push_back({r, i, c * static_cast<double>(sign)});
            });
        }
    }
    SparseOperator H(b.size(), t, true);
    st.hermiticity_error = H.hermiticity_error();
    if (stats) *stats = st;
    return H;
}

SparseOperator assemble_HI(const ModeGrid& g, const FockBasis& b, const KernelSpec& spec, const AssemblyOptions& opt,
                           AssemblyStats* stats) {
    const AmplitudeTable amps(g, spec, opt);
    return assemble_HI(g, b, amps, stats);
}

SparseOperator assemble_H(const SparseOperator& H0, const SparseOperator& HI, double g) {
    if (H0.dim() != HI.dim()) throw std::invalid_argument("assemble_H: dimension mismatch");
    return H0 + HI * cplx(g, 0.0);
}

namespace {

// Apply the three-operator product ops (right to left) on legs 1..3 with leg 4 fixed.
SparseOperator three_leg_operator(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps, int process,
                                  int k4, const std::array<Ladder, 3>& kinds) {
    const auto sp = process_species(process);
    std::vector<Triplet> t;
    if (!amps.enabled(process)) return SparseOperator(b.size(), t, false);
    const int n1 = g.count(sp[0]), n2 = g.count(sp[1]), n3 = g.count(sp[2]);
    for (std::int64_t i = 0; i < b.size(); ++i) {
        for (int k1 = 0; k1 < n1; ++k1) {
            auto [s1, g1] = apply_ladder(b[i], sp[0], k1, kinds[0]);
            if (!g1) continue;
            for (int k2 = 0; k2 < n2; ++k2) {
                auto [s2, g2] = apply_ladder(s1, sp[1], k2, kinds[1]);
                if (!g2) continue;
                for (int k3 = 0; k3 < n3; ++k3) {
                    auto [s3, g3] = apply_ladder(s2, sp[2], k3, kinds[2]);
                    if (!g3) continue;
                    const cplx c = amps.at(process, k1, k2, k3, k4);
                    if (c == 0.0) continue;
                    const std::int64_t r = b.find(s3);
                    if (r < 0) continue;
                    t.push_back({r, i, c * static_cast<double>(g1 * g2 * g3)});
                }
            }
        }
    }
    return SparseOperator(b.size(), t, false);
}

} // namespace

SparseOperator pull_through_V1(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps, int k4) {
    return three_leg_operator(g, b, amps, 2, k4, {Ladder::annihilate, Ladder::annihilate, Ladder::create});
}

SparseOperator pull_through_V2(const ModeGrid& g, const FockBasis& b, const AmplitudeTable& amps, int k4) {
    return three_leg_operator(g, b, amps, 3, k4, {Ladder::create, Ladder::create, Ladder::create});
}

RelativeBoundReport relative_bound_check(const SparseOperator& H0, const SparseOperator& HI, const ModelConstants& c,
                                         int trials, std::uint64_t seed) {
    RelativeBoundReport rep;
    const std::int64_t n = H0.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    VecC d0(n);
    for (std::int64_t i = 0; i < n; ++i) d0[i] = H0.at(i, i);

    auto probe = [&](const VecC& psi) {
        const double nrm = psi.norm();
        const double hi = HI.apply(psi).norm();
        const double h0 = H0.apply(psi).norm();
        const double rhs = c.K * (c.C * h0 + c.B * nrm);
        double sq = 0.0;
        for (std::int64_t i = 0; i < n; ++i) sq += (d0[i].real() + c.masses.m_p) * std::norm(psi[i]);
        const double rhs_sqrt = 2.0 * c.C0 * c.K * std::sqrt(sq);
        const double ratio = rhs > 0 ? hi / rhs : (hi > 0 ? INFINITY : 0.0);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (rhs_sqrt > 0) rep.max_ratio_sqrt = std::max(rep.max_ratio_sqrt, hi / rhs_sqrt);
        if (hi > rhs) ++rep.violations;
        ++rep.samples;
    };

    for (int t = 0; t < trials; ++t) {
        VecC psi(n);
        for (std::int64_t i = 0; i < n; ++i) psi[i] = cplx(nd(rng), nd(rng));
        probe(psi / psi.norm());
    }
    // H0 eigenvector extremes: lowest and highest free energy basis states
    std::int64_t lo = 0, hi = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (d0[i].real() < d0[lo].real()) lo = i;
        if (d0[i].real() > d0[hi].real()) hi = i;
    }
    for (std::int64_t i : {lo, hi}) {
        VecC e = VecC::Zero(n);
        e[i] = 1.0;
        probe(e);
    }
    rep.pass = rep.violations == 0;
    return rep;
}

} // namespace ibd
