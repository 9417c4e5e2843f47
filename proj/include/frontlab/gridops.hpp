#pragma once

#include "frontlab/cross_section.hpp"
#include "frontlab/nonlinearity.hpp"

#include <cstddef>
#include <vector>

namespace frontlab {

// Uniform axial grid z_j = z0 + j*dz, j = 0..n-1. Built so that z = 0 falls
// on a node (the auxiliary-front boundary lives there).
struct ZGrid {
    double z0 = 0.0;
    double dz = 0.02;
    std::size_t n = 0;

    double z(std::size_t j) const { return z0 + dz * static_cast<double>(j); }
    double z_min() const { return z0; }
    double z_max() const { return z(n - 1); }
    double span() const { return z_max() - z_min(); }
    // Nearest node index for a z value clamped into the grid.
    std::size_t index_near(double zz) const;

    static ZGrid over(double z_min, double z_max, double dz);
};

// Scalar field on ZGrid x CrossSectionMesh, laid out [j*ny + i].
struct GridField {
    std::vector<double> v;
    std::size_t ny = 1;

    double& at(std::size_t j, std::size_t i) { return v[j * ny + i]; }
    double at(std::size_t j, std::size_t i) const { return v[j * ny + i]; }
    std::size_t nz() const { return ny ? v.size() / ny : 0; }
};

// Coefficients of the exponentially fitted axial stencil
//   T[u]_j = (e^{+c dz/2}(u_{j+1}-u_j) - e^{-c dz/2}(u_j-u_{j-1})) / dz^2,
// a second-order discretization of u_zz + c u_z that is exactly the
// Euler-Lagrange operator of the weighted link energy.
struct FittedStencil {
    double cl = 0.0, cc = 0.0, cr = 0.0;
    static FittedStencil make(double c, double dz);
};

// Residual T[u] + Lap_y u + f(u,y) of the traveling-wave equation on interior
// nodes [j_lo, j_hi]; other nodes get 0.
void traveling_residual(const ReactionTerm& term, const CrossSectionMesh& mesh,
                        const ZGrid& zg, double c, const GridField& u, GridField& res,
                        std::size_t j_lo, std::size_t j_hi);

double residual_sup(const GridField& res, const CrossSectionMesh& mesh,
                    std::size_t j_lo, std::size_t j_hi);

// Thomas algorithm; arrays are overwritten, solution lands in rhs.
void tridiag_solve_inplace(std::vector<double>& sub, std::vector<double>& diag,
                           std::vector<double>& sup, std::vector<double>& rhs);

// Damped Newton solve of the traveling-wave equation on z-range [j_lo, j_hi]
// of u (all cross-section columns), with boundary conditions:
//   left:  mirror-ghost Neumann when neumann_left, else Dirichlet at j_lo-1
//   right: Dirichlet (values at j_hi+1..) taken from u itself.
// For dim 1 the solve relaxes z-lines (y neighbors lagged). Returns the final
// residual sup-norm.
double newton_polish(const ReactionTerm& term, const CrossSectionMesh& mesh, const ZGrid& zg,
                     double c, GridField& u, std::size_t j_lo, std::size_t j_hi,
                     bool neumann_left, double tol = 1e-11, int max_iter = 60);

} // namespace frontlab
