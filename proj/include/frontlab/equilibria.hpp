#pragma once

#include "frontlab/cross_section.hpp"
#include "frontlab/nonlinearity.hpp"

#include <optional>
#include <vector>

namespace frontlab {

// z-independent equilibrium v(y): Lap_y v + f(v,y) = 0 with the mesh tags.
struct Equilibrium {
    std::vector<double> v;       // grid function on the mesh
    double v_repr = 0.0;         // max value, used for ordering and display
    double energy = 0.0;         // E[v]
    double nu_tilde_left = 0.0;  // transverse index from one-sided f_u
    double nu_tilde_right = 0.0;
    bool is_v1 = false;
    bool resolved = true;        // Newton continuation converged
    double residual = 0.0;

    double nu_tilde() const { return std::min(nu_tilde_left, nu_tilde_right); }
};

// Energy E[v] of a grid function on the mesh (trapezoid quadrature).
double equilibrium_energy(const ReactionTerm& term, const CrossSectionMesh& mesh,
                          const std::vector<double>& v);

// All equilibria with values in (0,1], ascending by max value; is_v1 marks the
// smallest positive one. Constant roots come from per-piece polynomial root
// isolation; y-dependent problems seed Newton continuation from each root.
std::vector<Equilibrium> enumerate_equilibria(const ReactionTerm& term,
                                              const CrossSectionMesh& mesh);

// The smallest positive equilibrium, when any exists.
std::optional<Equilibrium> find_v1(const ReactionTerm& term, const CrossSectionMesh& mesh);

} // namespace frontlab
