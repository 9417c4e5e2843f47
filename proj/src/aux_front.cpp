#include "frontlab/aux_front.hpp"

#include "frontlab/errors.hpp"
#include "frontlab/speed_theory.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

double cutoff_eta(double z, double lo, double hi) {
    const double t = std::clamp((z - lo) / (hi - lo), 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

AuxiliaryFront AuxiliaryFront::constant(double level, const ZGrid& zg,
                                        const CrossSectionMesh& mesh, double c) {
    AuxiliaryFront a;
    a.c = c;
    a.constant_level = level;
    a.w.ny = mesh.n();
    a.w.v.assign(zg.n * mesh.n(), level);
    for (std::size_t j = 0; j < zg.n; ++j)
        for (std::size_t i = 0; i < mesh.n(); ++i)
            if (mesh.dirichlet_node(i)) a.w.at(j, i) = 0.0;
    a.psi0.assign(mesh.n(), 1.0);
    return a;
}

AuxParams select_parameters(double c, const ReactionTerm& term, const CrossSectionMesh& mesh) {
    std::vector<double> p(mesh.n());
    for (std::size_t i = 0; i < mesh.n(); ++i) p[i] = term.fu(0.0, i);
    const EigenPair e0 = principal_eigenpair(mesh, p);
    if (e0.nu >= 0.0) throw HypothesisError("zero state is not linearly unstable");
    const auto [lm, lp] = lambda_pm(c, e0.nu);
    (void)lp;
    if (!(c > 2.0 * lm) || !(lm > 0.0))
        throw SubcriticalError("speed at or below the linear spreading speed");

    AuxParams out;
    out.nu0 = e0.nu;
    out.lambda_minus = lm;
    const double gamma = term.holder_gamma();
    out.delta = 0.5 * std::min(gamma * lm, c - 2.0 * lm);
    out.holder_k = term.holder_constant();
    const double denom = out.delta * (c - 2.0 * lm - out.delta);
    double a = 0.25;
    if (out.holder_k > 1e-14) {
        const double pow_gamma = denom / (std::pow(2.0, 2.0 + gamma) * out.holder_k);
        a = std::min(a, std::pow(pow_gamma, 1.0 / gamma));
    }
    out.a = a;
    return out;
}

std::pair<GridField, GridField> build_bounds(double c, const AuxParams& p,
                                             const std::vector<double>& psi0,
                                             const CrossSectionMesh& mesh, const ZGrid& zg) {
    (void)c;
    GridField up, lo;
    up.ny = lo.ny = mesh.n();
    up.v.assign(zg.n * mesh.n(), 0.0);
    lo.v.assign(zg.n * mesh.n(), 0.0);
    for (std::size_t j = 0; j < zg.n; ++j) {
        const double z = zg.z(j);
        if (z < 0.0) continue;
        const double slow = std::exp(-p.lambda_minus * z);
        const double corr = std::exp(-p.delta * z);
        for (std::size_t i = 0; i < mesh.n(); ++i) {
            up.at(j, i) = p.a * psi0[i] * slow * (1.0 + corr);
            lo.at(j, i) = p.a * psi0[i] * slow * (1.0 - corr);
        }
    }
    return {lo, up};
}

double supersolution_operator(const AuxParams& p, double c, double gamma, double psi, double z) {
    const double lin = -p.a * p.delta * (c - 2.0 * p.lambda_minus - p.delta) * psi *
                       std::exp(-(p.lambda_minus + p.delta) * z);
    const double nl = p.holder_k * std::pow(p.a * psi, 1.0 + gamma) *
                      std::exp(-(1.0 + gamma) * p.lambda_minus * z) *
                      std::pow(1.0 + std::exp(-p.delta * z), 1.0 + gamma);
    return lin + nl;
}

double subsolution_operator(const AuxParams& p, double c, double gamma, double psi, double z) {
    const double lin = p.a * p.delta * (c - 2.0 * p.lambda_minus - p.delta) * psi *
                       std::exp(-(p.lambda_minus + p.delta) * z);
    const double nl = p.holder_k * std::pow(p.a * psi, 1.0 + gamma) *
                      std::exp(-(1.0 + gamma) * p.lambda_minus * z) *
                      std::pow(1.0 - std::exp(-p.delta * z), 1.0 + gamma);
    return lin - nl;
}

AuxiliaryFront build_w(double c, const ReactionTerm& term, const CrossSectionMesh& mesh,
                       const ZGrid& zg, const BuildWOptions& opts) {
    AuxParams params = select_parameters(c, term, mesh);
    std::vector<double> p0(mesh.n());
    for (std::size_t i = 0; i < mesh.n(); ++i) p0[i] = term.fu(0.0, i);
    const EigenPair e0 = principal_eigenpair(mesh, p0);

    auto [wlo, wup] = build_bounds(c, params, e0.psi, mesh, zg);

    const std::size_t j0 = zg.index_near(0.0);
    if (std::fabs(zg.z(j0)) > 1e-9) throw DomainError("front grid must carry a node at z = 0");
    const std::size_t jR = zg.n - 1;
    if (zg.z(jR) < 10.0 / params.lambda_minus - 1e-9)
        throw DomainError("z_max below 10 decay lengths of the slow mode");

    const std::size_t ny = mesh.n();
    GridField w = wup;
    // Boundary data at z = 0 and the right clamp.
    for (std::size_t i = 0; i < ny; ++i) {
        w.at(j0, i) = opts.boundary_scale * 2.0 * params.a * e0.psi[i];
        w.at(jR, i) = opts.clamp_right_to_lower ? wlo.at(jR, i) : wup.at(jR, i);
        if (mesh.dirichlet_node(i)) { w.at(j0, i) = 0.0; w.at(jR, i) = 0.0; }
    }

    // Shift keeping the sweep map order-preserving.
    double fu_sup = 0.0;
    for (std::size_t i = 0; i < ny; ++i)
        for (int k = 0; k <= 4096; ++k)
            fu_sup = std::max(fu_sup, std::fabs(term.fu_right(k / 4096.0, i)));
    const double shift = 1.05 * fu_sup;

    const FittedStencil st = FittedStencil::make(c, zg.dz);
    const double invh2 = (mesh.dim() == 1) ? 1.0 / (mesh.hy() * mesh.hy()) : 0.0;
    const std::size_t m = jR - j0 - 1;  // unknowns per column
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    std::vector<double> wn = w.v;
    GridField wnew = w;

    int sweeps = 0;
    double supdiff = 1e300;
    for (; sweeps < opts.max_sweeps; ++sweeps) {
        for (std::size_t i = 0; i < ny; ++i) {
            if (mesh.dirichlet_node(i)) continue;
            for (std::size_t k = 0; k < m; ++k) {
                const std::size_t j = j0 + 1 + k;
                double yterm = 0.0;
                double ydiag = 0.0;
                if (mesh.dim() == 1) {
                    const double wl = (i == 0) ? (mesh.bc_left() == BoundaryTag::Neumann ? w.at(j, 1) : 0.0)
                                               : w.at(j, i - 1);
                    const double wr = (i + 1 == ny) ? (mesh.bc_right() == BoundaryTag::Neumann ? w.at(j, ny - 2) : 0.0)
                                                    : w.at(j, i + 1);
                    yterm = (wl + wr) * invh2;
                    ydiag = -2.0 * invh2;
                }
                diag[k] = st.cc + ydiag - shift;
                sub[k] = (k > 0) ? st.cl : 0.0;
                sup[k] = (k + 1 < m) ? st.cr : 0.0;
                double r = -shift * w.at(j, i) - term.f(std::clamp(w.at(j, i), 0.0, 1.0), i) - yterm;
                if (k == 0) r -= st.cl * w.at(j0, i);
                if (k + 1 == m) r -= st.cr * w.at(jR, i);
                rhs[k] = r;
            }
            tridiag_solve_inplace(sub, diag, sup, rhs);
            for (std::size_t k = 0; k < m; ++k) wnew.at(j0 + 1 + k, i) = rhs[k];
        }
        // Order preservation and sandwich, asserted per sweep.
        supdiff = 0.0;
        for (std::size_t j = j0 + 1; j < jR; ++j)
            for (std::size_t i = 0; i < ny; ++i) {
                if (mesh.dirichlet_node(i)) continue;
                const double prev = w.at(j, i), next = wnew.at(j, i);
                if (next > prev + 1e-12)
                    throw IterationOrderError("monotone sweep increased the iterate");
                if (next > wup.at(j, i) + 1e-8 || next < wlo.at(j, i) - 1e-8)
                    throw IterationOrderError("iterate left the sub/supersolution sandwich");
                supdiff = std::max(supdiff, prev - next);
                w.at(j, i) = next;
            }
        if (supdiff <= opts.sweep_tol) break;
    }
    if (supdiff > 1e-9)
        throw ConvergenceError("monotone iteration did not reach tolerance", supdiff);

    AuxiliaryFront out;
    out.c = c;
    out.params = params;
    out.psi0 = e0.psi;
    out.boundary_scale = opts.boundary_scale;
    out.sweeps = sweeps + 1;

    // Tail residual before cutoff, on z in (3, z_max - 2).
    {
        GridField res;
        traveling_residual(term, mesh, zg, c, w, res,
                           zg.index_near(3.0) + 1, zg.index_near(zg.z_max() - 2.0));
        out.tail_residual = residual_sup(res, mesh, zg.index_near(3.0) + 1,
                                         zg.index_near(zg.z_max() - 2.0));
    }

    // Cutoff assembly and extension by zero.
    out.w.ny = ny;
    out.w.v.assign(zg.n * ny, 0.0);
    for (std::size_t j = 0; j < zg.n; ++j) {
        const double eta = cutoff_eta(zg.z(j), out.cutoff_lo, out.cutoff_hi);
        if (eta == 0.0) continue;
        for (std::size_t i = 0; i < ny; ++i) out.w.at(j, i) = eta * w.at(j, i);
    }
    (void)wn;
    return out;
}

} // namespace frontlab
