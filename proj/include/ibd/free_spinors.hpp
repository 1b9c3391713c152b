#pragma once

#include "ibd/landau_spinors.hpp"

#include <utility>

namespace ibd {

struct Momentum3 {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double norm() const;
    Momentum3 operator-() const { return {-p1, -p2, -p3}; }
};

struct HelicityPair {
    Eigen::Vector2cd plus;
    Eigen::Vector2cd minus;
};

// Helicity eigenvectors of sigma.p; on the ray p1 = p2 = 0, p3 > 0 the
// convention h+ = (1,0), h- = (0,1) is used. Throws for |p| = 0.
HelicityPair helicity_basis(const Momentum3& p);

// Neutron spinors U(p, lambda), V(p, lambda); twice_lambda = +1 or -1.
// At p = 0 uses a+ = 1, a- = 0 and the (1,0)/(0,1) convention.
std::pair<Spinor4, Spinor4> neutron_spinors(const Momentum3& p, int twice_lambda, double m_n);

// Massless spinors U(p, lambda) = (h, +-h)/sqrt2 and V(p, lambda) = (-+h, h)/sqrt2.
Spinor4 neutrino_U(const Momentum3& p, int twice_lambda);
Spinor4 neutrino_V(const Momentum3& p, int twice_lambda);

// (U(p, -1/2), W) with W = V(-p, +1/2).
std::pair<Spinor4, Spinor4> neutrino_spinors(const Momentum3& p);

// Free Dirac matrix [[m, sigma.p], [sigma.p, -m]].
Mat4 free_dirac_matrix(const Momentum3& p, double mass);

} // namespace ibd
