#pragma once

#include "frontlab/aux_front.hpp"
#include "frontlab/cross_section.hpp"
#include "frontlab/equilibria.hpp"
#include "frontlab/gridops.hpp"
#include "frontlab/nonlinearity.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace frontlab {

// Discrete front profile on ZGrid x mesh.
struct FrontProfile {
    ZGrid zg;
    CrossSectionMesh mesh;
    GridField u;
    double c = 0.0;
    double v_lo = 0.0, v_hi = 1.0;  // confinement band used
    double a_fit = 0.0, lambda_fit = 0.0;
    double plateau_value = 0.0;
    std::optional<Equilibrium> plateau;
    double residual_inf = 0.0;
    double psi_value = 0.0;  // renormalized functional value when variational
    std::vector<double> psi0;  // transverse principal mode for tail projection
    std::string provenance;
};

// Tilted correction field g = e^{cz/2} (u - w) and the box problem
//   minimize Psi[g] subject to  v_lo <= w + e^{-cz/2} g <= v_hi,  g(z_max)=0.
// All weighted quantities are evaluated through the tilt, which is exact
// algebra; exp(cz) itself never appears.
class TiltedProblem {
public:
    TiltedProblem(const ReactionTerm& term, const CrossSectionMesh& mesh, const ZGrid& zg,
                  double c, const AuxiliaryFront& w, std::pair<double, double> band);

    std::size_t size() const { return n_; }
    const ZGrid& zgrid() const { return zg_; }
    double value(const std::vector<double>& g) const;
    // Returns value; fills grad.
    double value_and_gradient(const std::vector<double>& g, std::vector<double>& grad) const;
    // Elementwise box projection.
    void project(std::vector<double>& g) const;
    // sup_j |g_j - P(g_j - scaled_grad_j)| with the EL-residual scaling.
    double projected_residual(const std::vector<double>& g, const std::vector<double>& grad) const;
    void scale_gradient(const std::vector<double>& grad, std::vector<double>& scaled) const;

    // Seed from a front-like profile u0(z,y); clipped into the box.
    std::vector<double> seed(const std::function<double(double, std::size_t)>& u0) const;
    // u = w + e^{-cz/2} g on the full grid.
    GridField assemble_u(const std::vector<double>& g) const;
    std::vector<double> tilt_from_u(const GridField& u) const;

    // Weighted L2 norm^2 of h through the tilt: sum dz sigma_j q_i g^2.
    double weighted_norm2(const std::vector<double>& g) const;

    const std::vector<double>& lower() const { return lo_; }
    const std::vector<double>& upper() const { return hi_; }

private:
    const ReactionTerm& term_;
    CrossSectionMesh mesh_;
    ZGrid zg_;
    double c_ = 0.0;
    const AuxiliaryFront& waux_;
    double band_lo_ = 0.0, band_hi_ = 1.0;
    std::size_t ny_ = 1, n_ = 0;
    double bm_ = 0.0, bp_ = 0.0;  // e^{-+ c dz/4}
    std::vector<double> sigma_;   // z-quadrature weights (dz-scaled trapezoid)
    std::vector<double> qw_;      // y-quadrature weights
    std::vector<double> ezm2_;    // e^{-c z_j / 2}
    std::vector<double> lo_, hi_;
    std::vector<double> collar_;  // dz sigma q e^{cz/2} r_w, zero off-collar
    std::vector<LocalExpansion> vex_;
    std::vector<double> node_w_;  // dz sigma_j q_i per node
    mutable std::vector<double> wbuf_;
};

struct SpgOptions {
    double tol = 1e-8;
    int max_iter = 200000;
    double early_exit_below = -1e300;
    int history = 10;
    int stall_limit = 50;
};

struct SpgResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    bool early_exit = false;
};

// Projected Barzilai-Borwein descent with nonmonotone line search.
SpgResult spg_minimize(const TiltedProblem& prob, std::vector<double>& g, const SpgOptions& opts);

struct FrontGridSpec {
    double dz = 0.02;
    double left_lengths = 40.0;   // decay lengths behind the front
    double right_lengths = 40.0;  // decay lengths ahead
    std::optional<double> z_min_override;
    std::optional<double> z_max_override;
};

// Grid sized from the dispersion exponents: z_max = max(right/lambda_-, 40),
// z_min = -max(left/lambda_tilde, 40) with lambda_tilde the slowest approach
// rate among stable equilibria.
ZGrid make_front_grid(double c, const ReactionTerm& term, const CrossSectionMesh& mesh,
                      const FrontGridSpec& spec = {});

struct MinimizeOptions {
    SpgOptions spg{};
    bool probe_mode = false;      // classification only: no extension/polish
    bool newton_polish = true;
    std::optional<GridField> warm_start_u;  // on the same z-grid
};

// Linear resampling of a field from one z-grid onto another (clamped ends).
GridField resample_z(const GridField& u, const ZGrid& from, const ZGrid& to);

// Variational front: minimize the renormalized weighted functional in the
// tilted variable over the band, extend the plateau leftward beyond the
// numeric support of the weight, polish, and post-process decay/plateau.
FrontProfile minimize_front(const ReactionTerm& term, const CrossSectionMesh& mesh,
                            const ZGrid& zg, double c, const AuxiliaryFront& waux,
                            std::pair<double, double> band, const MinimizeOptions& opts = {});

// ---- 1-D phase-plane shooting ----

enum class ShootKind { Plateau, Exit, Unresolved };

struct ShootOutcome {
    ShootKind kind = ShootKind::Unresolved;
    double plateau_v = 0.0;       // equilibrium reached (Plateau)
    double exit_value = 0.0;      // u at exit (Exit)
    double capture_z = 0.0;
    double min_saddle_distance = 1e300;
    std::vector<double> zs, us, ups;  // trajectory samples, decreasing z
};

struct ShootOptions {
    double z_stop = -80.0;
    double capture_radius = 1e-6;
    double rk_tol = 1e-11;
    double exit_slack = 1e-9;
};

// Backward integration of u'' + c u' + f(u) = 0 from the tail
// u = v_base + a e^{-lm z} + b e^{-lp z} at z0, with lm, lp the dispersion
// exponents about v_base. Classifies the omega-limit: PLATEAU(v) on entering
// the capture ball of a saddle (v,0) (the profile continues along the local
// invariant manifold), EXIT on leaving [0,1].
ShootOutcome shoot_1d(const ReactionTerm& term, double c, double v_base, double a, double b,
                      double z0, const ShootOptions& opts = {});

// Trajectory resampled onto a grid as a FrontProfile (dim 0 mesh only).
FrontProfile shoot_profile(const ReactionTerm& term, double c, double v_base, double a, double b,
                           double z0, const ZGrid& zg, const ShootOptions& opts = {});

// Front profile by forward integration from the plateau's invariant
// manifold: launch at u = v - eps on the descending branch and run down to
// the zero state (a forward-stable node), then continue the tail with the
// exact linear modes. This direction is well conditioned where backward
// shooting amplifies transverse modes like e^{|mu_-| z}.
FrontProfile shoot_forward_profile(const ReactionTerm& term, double c, double v_plateau,
                                   const ZGrid& zg, double eps = 1e-7,
                                   const ShootOptions& opts = {});

// ---- post-processing ----

struct DecayFit {
    double a_fit = 0.0;
    double lambda_fit = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    int points = 0;
};

// Log-linear least squares on the psi0-projected tail of (u - v_lo) over
// [z_max - L, z_max - L/4] where the projection is below 1e-3.
DecayFit extract_decay(const FrontProfile& p);

// Sup distance after aligning both fronts to unit tail amplitude
// (translation by log a_fit / lambda_fit, grid shift + linear interpolation).
double compare_fronts(const FrontProfile& p1, const FrontProfile& p2);

// Plateau column average near z_min, matched against the equilibria list.
void attach_plateau(FrontProfile& p, const ReactionTerm& term);

// Monotone decreasing rearrangement of the z-profile per cross-section node
// (test helper for the rearrangement optimality proxy).
GridField monotone_rearrangement_z(const GridField& u);

} // namespace frontlab
