#include "frontlab/speed_theory.hpp"

#include "frontlab/aux_front.hpp"
#include "frontlab/equilibria.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/front_solver.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

std::pair<double, double> lambda_pm(double c, double nu) {
    const double disc = c * c + 4.0 * nu;
    if (disc < 0.0)
        throw SubcriticalError("c^2 + 4 nu < 0: oscillatory linear modes, no positive tail");
    const double s = std::sqrt(disc);
    return {0.5 * (c - s), 0.5 * (c + s)};
}

ThresholdSpeeds threshold_speeds(const ReactionTerm& term, const CrossSectionMesh& mesh) {
    std::vector<double> p(mesh.n());
    for (std::size_t i = 0; i < mesh.n(); ++i) p[i] = term.fu(0.0, i);
    const EigenPair e0 = principal_eigenpair(mesh, p);
    if (e0.nu >= 0.0)
        throw HypothesisError("nu0 >= 0: the zero state is not linearly unstable");
    const std::vector<double> q = term.q_profile(mesh);
    const EigenPair eq = principal_eigenpair(mesh, q);
    // q >= f_u(0,.) pointwise forces nu_hat0 <= nu0 by eigenvalue monotonicity.
    if (eq.nu > e0.nu + 1e-9)
        throw Error("internal: nu_hat0 above nu0 despite q >= f_u(0)");
    ThresholdSpeeds out;
    out.nu0 = e0.nu;
    out.nu_hat0 = eq.nu;
    out.c0 = 2.0 * std::sqrt(-e0.nu);
    out.c_sharp = 2.0 * std::sqrt(-eq.nu);
    return out;
}

double probe_infimum(const ReactionTerm& term, const CrossSectionMesh& mesh,
                     std::pair<double, double> band, double c, const CStarOptions& opts,
                     double early_exit_below) {
    const ZGrid zg = ZGrid::over(opts.z_lo, opts.z_hi, opts.dz);
    const AuxiliaryFront wc = AuxiliaryFront::constant(band.first, zg, mesh, c);
    TiltedProblem prob(term, mesh, zg, c, wc, band);
    const double v_lo = band.first, v_hi = band.second;
    std::vector<double> g = prob.seed([&](double z, std::size_t) {
        return v_lo + (v_hi - v_lo) * 0.5 * (1.0 + std::tanh(-z));
    });
    SpgOptions sopt;
    sopt.tol = 1e-8;
    sopt.max_iter = opts.probe_max_iter;
    sopt.early_exit_below = early_exit_below;
    try {
        const SpgResult r = spg_minimize(prob, g, sopt);
        return r.value;
    } catch (const StallError&) {
        // A stalled probe still reports its best value; the classifier only
        // needs the sign with margin.
        return prob.value(g);
    }
}

BracketedSpeed estimate_c_star(const ReactionTerm& term, const CrossSectionMesh& mesh,
                               std::pair<double, double> band,
                               std::pair<double, double> bracket, double tol,
                               const CStarOptions& opts) {
    const double tol_neg = opts.tol_neg_factor * (opts.z_hi - opts.z_lo);
    int probes = 0;
    auto below = [&](double c) {
        ++probes;
        const double inf = probe_infimum(term, mesh, band, c, opts, -1.5 * tol_neg);
        return inf < -tol_neg;
    };
    double lo = bracket.first, hi = bracket.second;
    if (!(hi > lo)) throw DomainError("empty bisection bracket");
    if (!below(lo) || below(hi))
        throw BadBracketError("bracket endpoints classify identically");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (below(mid)) lo = mid;
        else hi = mid;
    }
    BracketedSpeed out;
    out.lo = lo;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    out.probes = probes;
    return out;
}

namespace {

// Forward RK4 with step doubling for the phase-plane system; returns +1 when
// the trajectory from the descending unstable manifold of (v_hi, 0) crosses
// below v_lo, -1 when it turns around above it. The sign flips exactly at
// the connection speed, and integrating in this direction keeps transverse
// errors contracting.
int bistable_side(const ReactionTerm& term, double c, double v_lo, double v_hi) {
    const double fu_hi = term.fu_left(v_hi, 0);
    const double mu_p = 0.5 * (-c + std::sqrt(c * c - 4.0 * fu_hi));
    const double eps = 1e-9;
    double u = v_hi - eps, p = -eps * mu_p;
    double h = 1e-3;
    const double margin = 1e-12;
    for (long it = 0; it < 4000000; ++it) {
        // one adaptive RK4 step of u' = p, p' = -c p - f(u)
        auto rhs = [&](double uu, double pp) {
            return std::pair<double, double>(pp, -c * pp - term.f(std::clamp(uu, 0.0, 1.0), 0));
        };
        auto step = [&](double uu, double pp, double hh) {
            const auto k1 = rhs(uu, pp);
            const auto k2 = rhs(uu + 0.5 * hh * k1.first, pp + 0.5 * hh * k1.second);
            const auto k3 = rhs(uu + 0.5 * hh * k2.first, pp + 0.5 * hh * k2.second);
            const auto k4 = rhs(uu + hh * k3.first, pp + hh * k3.second);
            return std::pair<double, double>(
                uu + hh / 6 * (k1.first + 2 * k2.first + 2 * k3.first + k4.first),
                pp + hh / 6 * (k1.second + 2 * k2.second + 2 * k3.second + k4.second));
        };
        const auto big = step(u, p, h);
        const auto mid = step(u, p, 0.5 * h);
        const auto two = step(mid.first, mid.second, 0.5 * h);
        const double err = std::max(std::fabs(big.first - two.first),
                                    std::fabs(big.second - two.second));
        const double scale = 1e-12 * (1.0 + std::fabs(u) + std::fabs(p));
        if (err > scale) {
            h *= 0.5;
            if (h < 1e-11) throw StiffnessError("bistable shooting step underflow");
            continue;
        }
        u = two.first;
        p = two.second;
        if (err < 0.03125 * scale && h < 0.02) h *= 2.0;
        if (u < v_lo - margin) return +1;
        if (p > 0.0 && u > v_lo + 1e-6) return -1;
    }
    throw ConvergenceError("bistable trajectory undecided", u);
}

} // namespace

BracketedSpeed bistable_speed_1d(const ReactionTerm& term, double v_lo, double v_hi,
                                 std::pair<double, double> bracket, double tol) {
    double lo = bracket.first, hi = bracket.second;
    const int side_lo = bistable_side(term, lo, v_lo, v_hi);
    const int side_hi = bistable_side(term, hi, v_lo, v_hi);
    if (side_lo == side_hi) throw BadBracketError("bistable bracket endpoints agree");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (bistable_side(term, mid, v_lo, v_hi) == side_lo) lo = mid;
        else hi = mid;
    }
    BracketedSpeed out;
    out.lo = lo;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    return out;
}

SpeedReport speed_report(const ReactionTerm& term, const CrossSectionMesh& mesh,
                         const SpeedReportOptions& opts) {
    SpeedReport rep;
    const ThresholdSpeeds th = threshold_speeds(term, mesh);
    rep.c0 = th.c0;
    rep.c_sharp = th.c_sharp;
    rep.nu0 = th.nu0;
    rep.nu_hat0 = th.nu_hat0;

    const auto v1 = find_v1(term, mesh);
    rep.v1 = v1 ? v1->v_repr : 1.0;

    rep.c_star = estimate_c_star(term, mesh, {0.0, 1.0}, opts.bracket, opts.tol, opts.probe);
    rep.c1_star = estimate_c_star(term, mesh, {0.0, rep.v1}, opts.bracket, opts.tol, opts.probe);
    if (v1 && rep.v1 < 1.0 - 1e-9) {
        rep.c_dag_v1 = estimate_c_star(term, mesh, {rep.v1, 1.0}, opts.dag_bracket,
                                       opts.dag_tol, opts.probe);
    }
    return rep;
}

} // namespace frontlab
