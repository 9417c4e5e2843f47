#pragma once

#include "frontlab/cross_section.hpp"
#include "frontlab/nonlinearity.hpp"

#include <optional>
#include <utility>

namespace frontlab {

// Real dispersion exponents lambda_-(c,nu) <= lambda_+(c,nu) of the linear
// tail modes e^{-lambda z}. Throws SubcriticalError when c^2 + 4 nu < 0.
std::pair<double, double> lambda_pm(double c, double nu);

struct ThresholdSpeeds {
    double c0 = 0.0;       // 2 sqrt(-nu0)
    double c_sharp = 0.0;  // 2 sqrt(-nu_hat0)
    double nu0 = 0.0;
    double nu_hat0 = 0.0;
};

// c0 from the principal eigenpair with potential f_u(0,.), c_sharp from the
// one with potential q(.). Requires nu0 < 0.
ThresholdSpeeds threshold_speeds(const ReactionTerm& term, const CrossSectionMesh& mesh);

struct BracketedSpeed {
    double value = 0.0;  // bracket midpoint
    double lo = 0.0, hi = 0.0;
    int probes = 0;
};

struct CStarOptions {
    double dz = 0.025;
    double z_lo = -25.0, z_hi = 60.0;
    double tol_neg_factor = 1e-6;  // margin is factor * domain length
    int probe_max_iter = 60000;
};

// Bisection for the threshold speed of the band [v_lo, v_hi]: the smallest c
// at which the confined infimum of the truncated weighted functional stops
// being negative. v_lo must be an equilibrium level (0, or v1 for the upper
// band). Endpoints must classify differently or BadBracketError is thrown.
BracketedSpeed estimate_c_star(const ReactionTerm& term, const CrossSectionMesh& mesh,
                               std::pair<double, double> band,
                               std::pair<double, double> bracket, double tol,
                               const CStarOptions& opts = {});

// Probe value: confined infimum estimate of the truncated functional at one c.
double probe_infimum(const ReactionTerm& term, const CrossSectionMesh& mesh,
                     std::pair<double, double> band, double c, const CStarOptions& opts,
                     double early_exit_below);

// Unique speed of the 1-D front connecting the stable levels v_lo and v_hi
// (phase-plane shooting with bisection on c). Independent route to the same
// constant as the variational bisection over the band (v_lo, v_hi).
BracketedSpeed bistable_speed_1d(const ReactionTerm& term, double v_lo, double v_hi,
                                 std::pair<double, double> bracket, double tol = 1e-11);

struct SpeedReport {
    double c0 = 0.0;
    double c_sharp = 0.0;
    BracketedSpeed c_star;
    BracketedSpeed c1_star;
    std::optional<BracketedSpeed> c_dag_v1;
    double nu0 = 0.0;
    double nu_hat0 = 0.0;
    double v1 = 0.0;
};

struct SpeedReportOptions {
    std::pair<double, double> bracket{1.2, 3.6};
    double tol = 0.05;
    std::pair<double, double> dag_bracket{2.2, 3.4};
    double dag_tol = 0.01;
    CStarOptions probe{};
};

SpeedReport speed_report(const ReactionTerm& term, const CrossSectionMesh& mesh,
                         const SpeedReportOptions& opts = {});

} // namespace frontlab
