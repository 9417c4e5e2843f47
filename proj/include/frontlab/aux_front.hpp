#pragma once

#include "frontlab/cross_section.hpp"
#include "frontlab/gridops.hpp"
#include "frontlab/nonlinearity.hpp"

#include <utility>
#include <vector>

namespace frontlab {

// Decay amplitude and correction rate of the auxiliary-front bounds.
struct AuxParams {
    double a = 0.0;
    double delta = 0.0;
    double lambda_minus = 0.0;
    double holder_k = 0.0;
    double nu0 = 0.0;
};

// Function w used to renormalize the weighted functional: zero for z < 2,
// solves the traveling-wave equation beyond the cutoff collar [2,3], decays
// like a*psi0*exp(-lambda_minus z). A constant equilibrium level is also
// representable (probe mode); it solves the equation everywhere, so the
// collar is empty.
struct AuxiliaryFront {
    GridField w;  // on the full front grid
    double c = 0.0;
    AuxParams params;
    std::vector<double> psi0;
    double constant_level = -1.0;  // >= 0 iff w is a constant equilibrium
    double boundary_scale = 1.0;
    double cutoff_lo = 2.0, cutoff_hi = 3.0;
    double tail_residual = 0.0;  // PDE residual sup for z > 3 before cutoff
    int sweeps = 0;

    bool is_constant() const { return constant_level >= 0.0; }

    static AuxiliaryFront constant(double level, const ZGrid& zg, const CrossSectionMesh& mesh,
                                   double c);
};

struct BuildWOptions {
    double boundary_scale = 1.0;  // data at z = 0 is scale * 2 a psi0
    bool clamp_right_to_lower = false;
    double sweep_tol = 1e-12;
    int max_sweeps = 60000;
};

// delta = min(gamma*lambda_minus, c - 2 lambda_minus)/2 and the largest a
// keeping both comparison brackets positive, capped so 2 a max(psi0) <= 1.
AuxParams select_parameters(double c, const ReactionTerm& term, const CrossSectionMesh& mesh);

// Tabulated supersolution/subsolution pair on the z >= 0 part of the grid
// (zero elsewhere): a psi0 e^{-lambda z}(1 +- e^{-delta z}).
std::pair<GridField, GridField> build_bounds(double c, const AuxParams& params,
                                             const std::vector<double>& psi0,
                                             const CrossSectionMesh& mesh, const ZGrid& zg);

// Closed-form values of the comparison operators on the bounds:
//   N(upper) = -a d (c-2l-d) psi e^{-(l+d)z} + K (a psi)^{1+g} e^{-(1+g)l z}(1+e^{-dz})^{1+g}
//   M(lower) = +a d (c-2l-d) psi e^{-(l+d)z} - K (a psi)^{1+g} e^{-(1+g)l z}(1-e^{-dz})^{1+g}
// The parameter selection must make N <= 0 and M >= 0 for all z >= 0.
double supersolution_operator(const AuxParams& p, double c, double gamma, double psi, double z);
double subsolution_operator(const AuxParams& p, double c, double gamma, double psi, double z);

// Monotone iteration from the supersolution on the z >= 0 portion of the
// grid, then cutoff assembly. Sweeps are z-line implicit with shift
// M = 1.05 sup|f_u|, which keeps the sweep map order-preserving; every sweep
// asserts pointwise non-increase and the sandwich.
AuxiliaryFront build_w(double c, const ReactionTerm& term, const CrossSectionMesh& mesh,
                       const ZGrid& zg, const BuildWOptions& opts = {});

// Quintic smoothstep cutoff: 0 for z <= lo, 1 for z >= hi.
double cutoff_eta(double z, double lo = 2.0, double hi = 3.0);

} // namespace frontlab
