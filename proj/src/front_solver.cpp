#include "frontlab/front_solver.hpp"

#include "frontlab/errors.hpp"
#include "frontlab/kernels.hpp"
#include "frontlab/polyroots.hpp"
#include "frontlab/speed_theory.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace frontlab {

namespace {
constexpr double kBoundCap = 1e300;
constexpr double kTiltExponentCap = 650.0;  // |c z| kept below this on the window
}

// ---------------------------------------------------------------------------
// TiltedProblem
// ---------------------------------------------------------------------------

TiltedProblem::TiltedProblem(const ReactionTerm& term, const CrossSectionMesh& mesh,
                             const ZGrid& zg, double c, const AuxiliaryFront& waux,
                             std::pair<double, double> band)
    : term_(term), mesh_(mesh), zg_(zg), c_(c), waux_(waux),
      band_lo_(band.first), band_hi_(band.second) {
    ny_ = mesh.n();
    n_ = zg.n * ny_;
    if (waux.w.v.size() != n_) throw DomainError("auxiliary front grid mismatch");
    if (std::max(std::fabs(c * zg.z_min()), std::fabs(c * zg.z_max())) > 1.4 * kTiltExponentCap)
        throw DomainError("tilt exponent outside representable window");

    bm_ = std::exp(-0.25 * c * zg.dz);
    bp_ = std::exp(0.25 * c * zg.dz);
    sigma_.assign(zg.n, zg.dz);
    sigma_.front() = 0.5 * zg.dz;
    sigma_.back() = 0.5 * zg.dz;
    qw_ = mesh.quad_weights();
    ezm2_.resize(zg.n);
    for (std::size_t j = 0; j < zg.n; ++j) ezm2_[j] = std::exp(-0.5 * c * zg.z(j));

    lo_.assign(n_, 0.0);
    hi_.assign(n_, 0.0);
    vex_.resize(n_);
    node_w_.assign(n_, 0.0);
    for (std::size_t j = 0; j < zg.n; ++j) {
        const double ezp2 = 1.0 / ezm2_[j];
        for (std::size_t i = 0; i < ny_; ++i) {
            const std::size_t k = j * ny_ + i;
            const double w = waux.w.at(j, i);
            node_w_[k] = sigma_[j] * qw_[i];
            vex_[k] = term.v_expansion(std::clamp(w, 0.0, 1.0), i);
            if (mesh.dirichlet_node(i) || j + 1 == zg.n) continue;  // pinned to 0
            lo_[k] = std::max(-kBoundCap, (band_lo_ - w) * ezp2);
            hi_[k] = std::min(kBoundCap, (band_hi_ - w) * ezp2);
            if (lo_[k] > hi_[k]) std::swap(lo_[k], hi_[k]);
        }
    }

    // Collar forcing: the cutoff makes w fail the equation on [2,3] only, so
    // the linear term of the functional lives there. Constant-equilibrium w
    // solves the equation everywhere and the collar is empty.
    collar_.assign(n_, 0.0);
    if (!waux.is_constant()) {
        GridField res;
        const std::size_t ja = zg.index_near(waux.cutoff_lo - 3.0 * zg.dz);
        const std::size_t jb = zg.index_near(waux.cutoff_hi + 3.0 * zg.dz);
        traveling_residual(term, mesh_, zg, c, waux.w, res, ja, jb);
        for (std::size_t j = ja; j <= jb && j < zg.n; ++j) {
            const double ezp2 = 1.0 / ezm2_[j];
            for (std::size_t i = 0; i < ny_; ++i) {
                const std::size_t k = j * ny_ + i;
                collar_[k] = node_w_[k] * ezp2 * res.at(j, i);
            }
        }
    }
    wbuf_.assign(zg.n, 0.0);
}

void TiltedProblem::project(std::vector<double>& g) const {
    kernels::ops().clamp_box(g.data(), lo_.data(), hi_.data(), n_);
}

double TiltedProblem::value(const std::vector<double>& g) const {
    const auto& K = kernels::ops();
    const std::size_t nz = zg_.n;
    double val = 0.0;
    if (ny_ == 1) {
        val += qw_[0] * K.link_energy(g.data(), nz, bm_, bp_, wbuf_.data()) / (2.0 * zg_.dz);
    } else {
        for (std::size_t i = 0; i < ny_; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j + 1 < nz; ++j) {
                const double w = bm_ * g[(j + 1) * ny_ + i] - bp_ * g[j * ny_ + i];
                acc += w * w;
            }
            val += qw_[i] * acc / (2.0 * zg_.dz);
        }
        const double invhy = 1.0 / mesh_.hy();
        for (std::size_t j = 0; j < nz; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < ny_; ++i) {
                const double d = g[j * ny_ + i + 1] - g[j * ny_ + i];
                acc += d * d;
            }
            val += sigma_[j] * 0.5 * invhy * acc;
        }
    }
    for (std::size_t j = 0; j < nz; ++j) {
        const double em = ezm2_[j];
        for (std::size_t i = 0; i < ny_; ++i) {
            const std::size_t k = j * ny_ + i;
            const double gk = g[k];
            if (gk == 0.0 && collar_[k] == 0.0) continue;
            const double h = em * gk;
            val += node_w_[k] * gk * gk * term_.v_remainder2(vex_[k], h, i);
            val -= collar_[k] * gk;
        }
    }
    return val;
}

double TiltedProblem::value_and_gradient(const std::vector<double>& g,
                                         std::vector<double>& grad) const {
    const auto& K = kernels::ops();
    const std::size_t nz = zg_.n;
    grad.assign(n_, 0.0);
    double val = 0.0;
    if (ny_ == 1) {
        val += qw_[0] * K.link_energy(g.data(), nz, bm_, bp_, wbuf_.data()) / (2.0 * zg_.dz);
        K.link_grad(wbuf_.data(), nz, bm_, bp_, qw_[0] / zg_.dz, grad.data());
    } else {
        std::vector<double> col(nz), wcol(nz > 1 ? nz - 1 : 1), gcol(nz, 0.0);
        for (std::size_t i = 0; i < ny_; ++i) {
            for (std::size_t j = 0; j < nz; ++j) col[j] = g[j * ny_ + i];
            std::fill(gcol.begin(), gcol.end(), 0.0);
            val += qw_[i] * K.link_energy(col.data(), nz, bm_, bp_, wcol.data()) / (2.0 * zg_.dz);
            K.link_grad(wcol.data(), nz, bm_, bp_, qw_[i] / zg_.dz, gcol.data());
            for (std::size_t j = 0; j < nz; ++j) grad[j * ny_ + i] += gcol[j];
        }
        const double invhy = 1.0 / mesh_.hy();
        for (std::size_t j = 0; j < nz; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < ny_; ++i) {
                const double d = g[j * ny_ + i + 1] - g[j * ny_ + i];
                acc += d * d;
                grad[j * ny_ + i] -= sigma_[j] * invhy * d;
                grad[j * ny_ + i + 1] += sigma_[j] * invhy * d;
            }
            val += sigma_[j] * 0.5 * invhy * acc;
        }
    }
    for (std::size_t j = 0; j < nz; ++j) {
        const double em = ezm2_[j];
        for (std::size_t i = 0; i < ny_; ++i) {
            const std::size_t k = j * ny_ + i;
            const double gk = g[k];
            if (gk == 0.0 && collar_[k] == 0.0) continue;
            const double h = em * gk;
            val += node_w_[k] * gk * gk * term_.v_remainder2(vex_[k], h, i);
            grad[k] += node_w_[k] * gk * term_.v_dremainder(vex_[k], h, i);
            val -= collar_[k] * gk;
            grad[k] -= collar_[k];
        }
    }
    return val;
}

void TiltedProblem::scale_gradient(const std::vector<double>& grad,
                                   std::vector<double>& scaled) const {
    scaled.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) scaled[k] = grad[k] / node_w_[k];
}

double TiltedProblem::projected_residual(const std::vector<double>& g,
                                         const std::vector<double>& grad) const {
    std::vector<double> scaled;
    scale_gradient(grad, scaled);
    return kernels::ops().proj_residual_sup(g.data(), scaled.data(), lo_.data(), hi_.data(), n_);
}

std::vector<double> TiltedProblem::seed(
    const std::function<double(double, std::size_t)>& u0) const {
    std::vector<double> g(n_, 0.0);
    for (std::size_t j = 0; j < zg_.n; ++j) {
        const double ezp2 = 1.0 / ezm2_[j];
        for (std::size_t i = 0; i < ny_; ++i) {
            const std::size_t k = j * ny_ + i;
            const double w = waux_.w.at(j, i);
            // Tail-matched: below w the correction seeds at zero, which keeps
            // the tilted field representable everywhere.
            double h = std::clamp(u0(zg_.z(j), i) - w, 0.0, band_hi_ - w);
            g[k] = h * ezp2;
        }
    }
    project(g);
    return g;
}

GridField TiltedProblem::assemble_u(const std::vector<double>& g) const {
    GridField u;
    u.ny = ny_;
    u.v.resize(n_);
    for (std::size_t j = 0; j < zg_.n; ++j)
        for (std::size_t i = 0; i < ny_; ++i) {
            const std::size_t k = j * ny_ + i;
            u.v[k] = waux_.w.at(j, i) + ezm2_[j] * g[k];
        }
    return u;
}

std::vector<double> TiltedProblem::tilt_from_u(const GridField& u) const {
    std::vector<double> g(n_, 0.0);
    for (std::size_t j = 0; j < zg_.n; ++j)
        for (std::size_t i = 0; i < ny_; ++i) {
            const std::size_t k = j * ny_ + i;
            g[k] = (u.at(j, i) - waux_.w.at(j, i)) / ezm2_[j];
        }
    project(g);
    return g;
}

double TiltedProblem::weighted_norm2(const std::vector<double>& g) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_; ++k) acc += node_w_[k] * g[k] * g[k];
    return acc;
}

// ---------------------------------------------------------------------------
// Projected Barzilai-Borwein descent (nonmonotone line search)
// ---------------------------------------------------------------------------

SpgResult spg_minimize(const TiltedProblem& prob, std::vector<double>& g, const SpgOptions& opts) {
    const auto& K = kernels::ops();
    const std::size_t n = prob.size();
    prob.project(g);
    std::vector<double> grad(n), gnew(n), gradnew(n), d(n);
    double f = prob.value_and_gradient(g, grad);
    std::deque<double> hist{f};
    double alpha = prob.zgrid().dz;
    double best = f;
    int no_progress = 0;
    SpgResult res;

    for (int it = 1; it <= opts.max_iter; ++it) {
        res.iterations = it;
        const double pg = prob.projected_residual(g, grad);
        if (pg <= opts.tol) {
            res.converged = true;
            break;
        }
        K.xpad(g.data(), -alpha, grad.data(), d.data(), n);
        K.clamp_box(d.data(), prob.lower().data(), prob.upper().data(), n);
        for (std::size_t k = 0; k < n; ++k) d[k] -= g[k];
        double gtd = K.dot(grad.data(), d.data(), n);
        if (gtd >= 0.0) {  // numerical corner: fall back to a tiny step
            alpha *= 0.1;
            if (alpha < 1e-18) throw StallError("descent direction collapsed");
            continue;
        }
        const double fref = *std::max_element(hist.begin(), hist.end());
        double lam = 1.0;
        double fnew = 0.0;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            K.xpad(g.data(), lam, d.data(), gnew.data(), n);
            fnew = prob.value(gnew);
            if (std::isfinite(fnew) && fnew <= fref + 1e-4 * lam * gtd) {
                ok = true;
                break;
            }
            lam *= 0.5;
        }
        if (!ok) throw StallError("line search failed to make progress");

        fnew = prob.value_and_gradient(gnew, gradnew);
        double sty = 0.0, sts = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double s = gnew[k] - g[k];
            sts += s * s;
            sty += s * (gradnew[k] - grad[k]);
        }
        alpha = (sty > 1e-300) ? std::clamp(sts / sty, 1e-14, 1e14) : alpha * 10.0;
        g.swap(gnew);
        grad.swap(gradnew);
        f = fnew;
        hist.push_back(f);
        if (static_cast<int>(hist.size()) > opts.history) hist.pop_front();

        if (f < best - 1e-14 * (1.0 + std::fabs(best))) {
            best = f;
            no_progress = 0;
        } else if (++no_progress >= opts.stall_limit * 4 &&
                   prob.projected_residual(g, grad) > 10.0 * opts.tol) {
            throw StallError("no objective decrease across consecutive accepted steps");
        }
        if (f < opts.early_exit_below) {
            res.early_exit = true;
            break;
        }
    }
    res.value = f;
    return res;
}

// ---------------------------------------------------------------------------
// Grids, minimization driver, post-processing
// ---------------------------------------------------------------------------

ZGrid make_front_grid(double c, const ReactionTerm& term, const CrossSectionMesh& mesh,
                      const FrontGridSpec& spec) {
    std::vector<double> p(mesh.n());
    for (std::size_t i = 0; i < mesh.n(); ++i) p[i] = term.fu(0.0, i);
    const EigenPair e0 = principal_eigenpair(mesh, p);
    if (e0.nu >= 0.0) throw HypothesisError("zero state is not linearly unstable");
    const auto [lm, lp] = lambda_pm(c, e0.nu);
    (void)lp;

    double z_max = std::max(spec.right_lengths / lm, 40.0);
    double rate_min = 0.0;
    for (const Equilibrium& eq : enumerate_equilibria(term, mesh)) {
        const double nt = eq.nu_tilde();
        if (nt <= 0.0 || !eq.resolved) continue;
        const double rate = 0.5 * (std::sqrt(c * c + 4.0 * nt) - c);
        if (rate_min == 0.0 || rate < rate_min) rate_min = rate;
    }
    double z_min = -std::max(rate_min > 0.0 ? spec.left_lengths / rate_min : 0.0, 40.0);
    if (spec.z_min_override) z_min = *spec.z_min_override;
    if (spec.z_max_override) z_max = *spec.z_max_override;
    return ZGrid::over(z_min, z_max, spec.dz);
}

namespace {

// Quintic smoothstep on [0,1].
double smoothstep5(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

ZGrid subgrid_from(const ZGrid& zg, std::size_t j_from) {
    ZGrid s;
    s.dz = zg.dz;
    s.z0 = zg.z(j_from);
    s.n = zg.n - j_from;
    return s;
}

AuxiliaryFront slice_aux(const AuxiliaryFront& waux, std::size_t j_from, std::size_t ny) {
    AuxiliaryFront s = waux;
    s.w.v.assign(waux.w.v.begin() + static_cast<std::ptrdiff_t>(j_from * ny), waux.w.v.end());
    return s;
}

} // namespace

FrontProfile minimize_front(const ReactionTerm& term, const CrossSectionMesh& mesh,
                            const ZGrid& zg, double c, const AuxiliaryFront& waux,
                            std::pair<double, double> band, const MinimizeOptions& opts) {
    if (waux.w.v.size() != zg.n * mesh.n()) throw DomainError("auxiliary front grid mismatch");
    const double v_lo = band.first, v_hi = band.second;
    if (!(v_hi > v_lo)) throw DomainError("empty confinement band");

    // The weighted functional only has numeric support where |c z| is
    // representable in the tilt; the plateau beyond is a PDE continuation.
    std::size_t jv = 0;
    if (c * zg.z_min() < -kTiltExponentCap)
        jv = zg.index_near(-kTiltExponentCap / c);
    const ZGrid wg = subgrid_from(zg, jv);
    const AuxiliaryFront wslice = slice_aux(waux, jv, mesh.n());
    TiltedProblem prob(term, mesh, wg, c, wslice, band);

    std::vector<double> g;
    if (opts.warm_start_u && opts.warm_start_u->v.size() == zg.n * mesh.n()) {
        GridField uw0;
        uw0.ny = mesh.n();
        uw0.v.assign(opts.warm_start_u->v.begin() + static_cast<std::ptrdiff_t>(jv * mesh.n()),
                     opts.warm_start_u->v.end());
        g = prob.tilt_from_u(uw0);
    } else {
        g = prob.seed([&](double z, std::size_t) {
            return v_lo + (v_hi - v_lo) * smoothstep5(-z);
        });
    }
    const SpgResult spg = spg_minimize(prob, g, opts.spg);

    FrontProfile p;
    p.zg = zg;
    p.mesh = mesh;
    p.c = c;
    p.v_lo = v_lo;
    p.v_hi = v_hi;
    p.psi_value = spg.value;
    p.psi0 = waux.is_constant() ? std::vector<double>(mesh.n(), 1.0) : waux.psi0;
    p.provenance = waux.is_constant() ? "probe" : "variational";

    GridField uw = prob.assemble_u(g);
    p.u.ny = mesh.n();
    p.u.v.assign(zg.n * mesh.n(), 0.0);
    for (std::size_t j = 0; j < wg.n; ++j)
        for (std::size_t i = 0; i < mesh.n(); ++i)
            p.u.at(jv + j, i) = std::clamp(uw.at(j, i), 0.0, 1.0);

    if (opts.probe_mode) return p;

    // Plateau continuation into the region the weight cannot see, then a
    // global polish of the discrete equation (translation stays pinned by the
    // Dirichlet tail value).
    for (std::size_t j = 0; j < jv; ++j)
        for (std::size_t i = 0; i < mesh.n(); ++i) p.u.at(j, i) = p.u.at(jv, i);
    if (opts.newton_polish) {
        const int max_iter = (mesh.dim() == 0) ? 60 : 30;
        try {
            newton_polish(term, mesh, zg, c, p.u, 0, zg.n - 2, true, 1e-11, max_iter);
        } catch (const ConvergenceError&) {
            // keep the unpolished minimizer; residual_inf reports the truth
        }
        for (double& x : p.u.v) x = std::clamp(x, 0.0, 1.0);
    }

    {
        GridField res;
        traveling_residual(term, mesh, zg, c, p.u, res, 1, zg.n - 2);
        p.residual_inf = residual_sup(res, mesh, 1, zg.n - 2);
    }

    // Flattening check at the left boundary.
    const std::size_t jprobe = std::min<std::size_t>(zg.n - 1, zg.n / 20 + 1);
    double flat = 0.0;
    for (std::size_t i = 0; i < mesh.n(); ++i)
        flat = std::max(flat, std::fabs(p.u.at(0, i) - p.u.at(jprobe, i)));
    if (flat > 1e-4)
        throw DomainTooShortError("profile still varies at the left boundary");

    attach_plateau(p, term);
    try {
        const DecayFit fit = extract_decay(p);
        p.a_fit = fit.a_fit;
        p.lambda_fit = fit.lambda_fit;
    } catch (const TailUnresolvedError&) {
        p.a_fit = 0.0;
        p.lambda_fit = 0.0;
    }
    return p;
}

// ---------------------------------------------------------------------------
// 1-D shooting
// ---------------------------------------------------------------------------

namespace {

struct OdeState {
    double u, p;
};

inline OdeState rhs(const ReactionTerm& term, double c, const OdeState& s) {
    const double uc = std::clamp(s.u, 0.0, 1.0);
    double f = term.f(uc, 0);
    // Linear continuation outside [0,1] keeps the exit event well-behaved.
    if (s.u < 0.0) f = term.fu(0.0, 0) * s.u;
    if (s.u > 1.0) f = term.fu(1.0, 0) * (s.u - 1.0);
    return {s.p, -c * s.p - f};
}

inline OdeState rk4_step(const ReactionTerm& term, double c, const OdeState& s, double h) {
    const OdeState k1 = rhs(term, c, s);
    const OdeState s2{s.u + 0.5 * h * k1.u, s.p + 0.5 * h * k1.p};
    const OdeState k2 = rhs(term, c, s2);
    const OdeState s3{s.u + 0.5 * h * k2.u, s.p + 0.5 * h * k2.p};
    const OdeState k3 = rhs(term, c, s3);
    const OdeState s4{s.u + h * k3.u, s.p + h * k3.p};
    const OdeState k4 = rhs(term, c, s4);
    return {s.u + h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
            s.p + h / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

std::vector<double> saddle_levels(const ReactionTerm& term) {
    std::vector<double> out;
    for (const Piece& pc : term.pieces())
        for (double r : poly_real_roots(pc.f, pc.lo, pc.hi)) {
            if (term.fu_left(r, 0) > 1e-12 && term.fu_right(r, 0) > 1e-12) continue;
            bool dup = false;
            for (double e : out) dup = dup || std::fabs(e - r) < 1e-9;
            if (!dup) out.push_back(r);
        }
    return out;
}

} // namespace

ShootOutcome shoot_1d(const ReactionTerm& term, double c, double v_base, double a, double b,
                      double z0, const ShootOptions& opts) {
    ShootOutcome out;
    const double nu = -term.fu_right(v_base, 0);
    const auto [lm, lp] = lambda_pm(c, nu);

    if (a == 0.0 && b == 0.0) {
        out.kind = ShootKind::Plateau;
        out.plateau_v = v_base;
        out.capture_z = z0;
        out.zs = {z0, opts.z_stop};
        out.us = {v_base, v_base};
        out.ups = {0.0, 0.0};
        return out;
    }

    OdeState s{v_base + a * std::exp(-lm * z0) + b * std::exp(-lp * z0),
               -a * lm * std::exp(-lm * z0) - b * lp * std::exp(-lp * z0)};
    const std::vector<double> saddles = saddle_levels(term);

    double z = z0;
    double h = -1e-3;
    out.zs.push_back(z);
    out.us.push_back(s.u);
    out.ups.push_back(s.p);
    while (z > opts.z_stop) {
        if (z + h < opts.z_stop) h = opts.z_stop - z;
        // step doubling error control
        const OdeState big = rk4_step(term, c, s, h);
        const OdeState half = rk4_step(term, c, s, 0.5 * h);
        const OdeState two = rk4_step(term, c, half, 0.5 * h);
        const double err = std::max(std::fabs(big.u - two.u), std::fabs(big.p - two.p));
        const double scale = opts.rk_tol * (1.0 + std::fabs(s.u) + std::fabs(s.p));
        if (err > scale) {
            h *= 0.5;
            if (std::fabs(h) < 1e-11) throw StiffnessError("shooting step size underflow");
            continue;
        }
        s = two;
        z += h;
        if (err < 0.03125 * scale && std::fabs(h) < 0.02) h *= 2.0;
        out.zs.push_back(z);
        out.us.push_back(s.u);
        out.ups.push_back(s.p);

        if (s.u > 1.0 + opts.exit_slack || s.u < -opts.exit_slack) {
            out.kind = ShootKind::Exit;
            out.exit_value = s.u;
            return out;
        }
        for (double v : saddles) {
            const double d = std::hypot(s.u - v, s.p);
            out.min_saddle_distance = std::min(out.min_saddle_distance, d);
            if (d < opts.capture_radius) {
                // Genuine connections sit on the invariant manifold that
                // decays backward; reject passers-by via the coefficient of
                // the backward-growing mode.
                const double fu_v = term.fu_right(v, 0);
                const double disc = c * c - 4.0 * fu_v;
                if (disc > 0.0) {
                    const double sq = std::sqrt(disc);
                    const double mu_p = 0.5 * (-c + sq), mu_m = 0.5 * (-c - sq);
                    const double B = (s.p - mu_p * (s.u - v)) / (mu_m - mu_p);
                    if (std::fabs(B) > std::max(0.02 * opts.capture_radius, 1e-12)) continue;
                }
                out.kind = ShootKind::Plateau;
                out.plateau_v = v;
                out.capture_z = z;
                return out;
            }
        }
    }
    out.kind = ShootKind::Unresolved;
    return out;
}

FrontProfile shoot_profile(const ReactionTerm& term, double c, double v_base, double a, double b,
                           double z0, const ZGrid& zg, const ShootOptions& opts) {
    ShootOutcome oc = shoot_1d(term, c, v_base, a, b, z0, opts);
    if (oc.kind != ShootKind::Plateau)
        throw DomainError("shooting trajectory did not reach a plateau");

    const double nu = -term.fu_right(v_base, 0);
    const auto [lm, lp] = lambda_pm(c, nu);

    FrontProfile p;
    p.zg = zg;
    p.mesh = CrossSectionMesh::point();
    p.c = c;
    p.v_lo = v_base;
    p.v_hi = std::max(oc.plateau_v, v_base);
    p.psi0 = {1.0};
    p.provenance = "shoot";
    p.u.ny = 1;
    p.u.v.assign(zg.n, 0.0);

    const double v = oc.plateau_v;
    const double fu_v = term.fu_right(v, 0);
    const double disc = std::sqrt(std::max(0.0, c * c - 4.0 * fu_v));
    const double mu_p = 0.5 * (-c + disc);
    const double mu_m = 0.5 * (-c - disc);
    // Deviation component along the direction that decays as z -> -inf.
    std::size_t icap = oc.zs.size() - 1;
    const double du = oc.us[icap] - v, dp = oc.ups[icap];
    const double amp = (std::fabs(mu_m - mu_p) > 1e-14) ? (mu_m * du - dp) / (mu_m - mu_p) : du;

    for (std::size_t j = 0; j < zg.n; ++j) {
        const double z = zg.z(j);
        if (z >= z0) {
            p.u.v[j] = v_base + a * std::exp(-lm * z) + b * std::exp(-lp * z);
        } else if (z <= oc.capture_z) {
            p.u.v[j] = v + amp * std::exp(mu_p * (z - oc.capture_z));
        } else {
            // Hermite interpolation on the stored trajectory (z decreasing).
            std::size_t kk = 0;
            while (kk + 1 < oc.zs.size() && oc.zs[kk + 1] > z) ++kk;
            const double za = oc.zs[kk], zb = oc.zs[kk + 1];
            const double t = (z - za) / (zb - za);
            const double dzab = zb - za;
            const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
            const double h10 = t * (1 - t) * (1 - t);
            const double h01 = t * t * (3 - 2 * t);
            const double h11 = t * t * (t - 1);
            p.u.v[j] = h00 * oc.us[kk] + h10 * dzab * oc.ups[kk] + h01 * oc.us[kk + 1] +
                       h11 * dzab * oc.ups[kk + 1];
        }
        p.u.v[j] = std::clamp(p.u.v[j], 0.0, 1.0);
    }
    attach_plateau(p, term);
    const DecayFit fit = extract_decay(p);
    p.a_fit = fit.a_fit;
    p.lambda_fit = fit.lambda_fit;
    {
        GridField res;
        traveling_residual(term, p.mesh, zg, c, p.u, res, 1, zg.n - 2);
        p.residual_inf = residual_sup(res, p.mesh, 1, zg.n - 2);
    }
    return p;
}

FrontProfile shoot_forward_profile(const ReactionTerm& term, double c, double v_plateau,
                                   const ZGrid& zg, double eps, const ShootOptions& opts) {
    // Unstable-manifold direction of the saddle (v,0) on the descending side.
    const double fu_v = term.fu_left(v_plateau, 0);
    const double disc_v = c * c - 4.0 * fu_v;
    if (!(fu_v < 0.0) || !(disc_v > 0.0))
        throw DomainError("plateau level is not a saddle of the traveling system");
    const double mu_p = 0.5 * (-c + std::sqrt(disc_v));

    const double nu0 = -term.fu_right(0.0, 0);
    const auto [lm, lp] = lambda_pm(c, nu0);

    // Launch so the midlevel crossing lands near z = 0.
    const double z_launch = -std::log(v_plateau / (2.0 * eps)) / mu_p;

    OdeState s{v_plateau - eps, -eps * mu_p};
    double z = z_launch;
    double h = 1e-3;
    std::vector<double> zs{z}, us{s.u}, ups{s.p};
    const double u_switch = 1e-8;
    const double z_limit = zg.z_max() + 10.0;
    while (s.u > u_switch && z < z_limit) {
        const OdeState big = rk4_step(term, c, s, h);
        const OdeState half = rk4_step(term, c, s, 0.5 * h);
        const OdeState two = rk4_step(term, c, half, 0.5 * h);
        const double err = std::max(std::fabs(big.u - two.u), std::fabs(big.p - two.p));
        const double scale = opts.rk_tol * (1.0 + std::fabs(s.u) + std::fabs(s.p));
        if (err > scale) {
            h *= 0.5;
            if (h < 1e-11) throw StiffnessError("forward shooting step underflow");
            continue;
        }
        s = two;
        z += h;
        if (err < 0.03125 * scale && h < 0.02) h *= 2.0;
        zs.push_back(z);
        us.push_back(s.u);
        ups.push_back(s.p);
        if (s.u < -1e-9 || s.u > 1.0 + 1e-9)
            throw DomainError("forward trajectory left [0,1]; level is not a front plateau");
    }
    if (s.u > u_switch)
        throw DomainTooShortError("forward trajectory did not reach the tail switch level");

    // Exact linear modes beyond the switch point.
    const double z_s = z;
    const double A = (s.p + lp * s.u) / (lp - lm);
    const double B = -(s.p + lm * s.u) / (lp - lm);

    FrontProfile p;
    p.zg = zg;
    p.mesh = CrossSectionMesh::point();
    p.c = c;
    p.v_lo = 0.0;
    p.v_hi = 1.0;
    p.psi0 = {1.0};
    p.provenance = "shoot";
    p.u.ny = 1;
    p.u.v.assign(zg.n, 0.0);
    for (std::size_t j = 0; j < zg.n; ++j) {
        const double zz = zg.z(j);
        double val;
        if (zz <= z_launch) {
            val = v_plateau - eps * std::exp(mu_p * (zz - z_launch));
        } else if (zz >= z_s) {
            val = A * std::exp(-lm * (zz - z_s)) + B * std::exp(-lp * (zz - z_s));
        } else {
            std::size_t kk = 0;
            while (kk + 1 < zs.size() && zs[kk + 1] < zz) ++kk;
            const double za = zs[kk], zb = zs[kk + 1];
            const double t = (zz - za) / (zb - za);
            const double dzab = zb - za;
            const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
            const double h10 = t * (1 - t) * (1 - t);
            const double h01 = t * t * (3 - 2 * t);
            const double h11 = t * t * (t - 1);
            val = h00 * us[kk] + h10 * dzab * ups[kk] + h01 * us[kk + 1] +
                  h11 * dzab * ups[kk + 1];
        }
        p.u.v[j] = std::clamp(val, 0.0, 1.0);
    }
    attach_plateau(p, term);
    const DecayFit fit = extract_decay(p);
    p.a_fit = fit.a_fit;
    p.lambda_fit = fit.lambda_fit;
    {
        GridField res;
        traveling_residual(term, p.mesh, zg, c, p.u, res, 1, zg.n - 2);
        p.residual_inf = residual_sup(res, p.mesh, 1, zg.n - 2);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Decay fit, alignment, plateau
// ---------------------------------------------------------------------------

namespace {

// psi0-projected amplitude of (u - v_lo) per z node.
std::vector<double> tail_amplitude(const FrontProfile& p) {
    const std::size_t ny = p.mesh.n();
    std::vector<double> alpha(p.zg.n, 0.0);
    double den = 0.0;
    for (std::size_t i = 0; i < ny; ++i)
        den += p.mesh.quad_weights()[i] * p.psi0[i] * p.psi0[i];
    for (std::size_t j = 0; j < p.zg.n; ++j) {
        double num = 0.0;
        for (std::size_t i = 0; i < ny; ++i)
            num += p.mesh.quad_weights()[i] * p.psi0[i] * (p.u.at(j, i) - p.v_lo);
        alpha[j] = num / den;
    }
    return alpha;
}

} // namespace

DecayFit extract_decay(const FrontProfile& p) {
    const std::vector<double> alpha = tail_amplitude(p);
    const double z_max = p.zg.z_max();
    std::size_t j_small = p.zg.n;
    for (std::size_t j = 0; j < p.zg.n; ++j)
        if (std::fabs(alpha[j]) < 1e-3) { j_small = j; break; }
    if (j_small >= p.zg.n) throw TailUnresolvedError("tail never drops below 1e-3");
    const double L = z_max - p.zg.z(j_small);
    const double w_lo = z_max - L, w_hi = z_max - 0.25 * L;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t j = j_small; j < p.zg.n; ++j) {
        const double z = p.zg.z(j);
        if (z < w_lo || z > w_hi) continue;
        if (!(alpha[j] > 0.0)) throw TailUnresolvedError("tail amplitude nonpositive in window");
        const double y = std::log(alpha[j]);
        sx += z; sy += y; sxx += z * z; sxy += z * y;
        ++m;
    }
    if (m < 20) throw TailUnresolvedError("decay window has fewer than 20 nodes");
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    DecayFit fit;
    fit.lambda_fit = -slope;
    fit.a_fit = std::exp(intercept);
    fit.window_lo = w_lo;
    fit.window_hi = w_hi;
    fit.points = m;
    return fit;
}

double compare_fronts(const FrontProfile& p1, const FrontProfile& p2) {
    if (!(p1.mesh == p2.mesh)) throw DomainError("fronts live on different cross-sections");
    if (std::fabs(p1.c - p2.c) > 1e-12) throw DomainError("fronts have different speeds");
    const DecayFit d1 = extract_decay(p1);
    const DecayFit d2 = extract_decay(p2);
    const double lam = 0.5 * (d1.lambda_fit + d2.lambda_fit);
    // Shift aligning both tails to unit amplitude: evaluate p2 at z + s.
    const double s = std::log(d2.a_fit / d1.a_fit) / lam;

    const double lo = std::max(p1.zg.z_min(), p2.zg.z_min() - s) + 2.0 * p1.zg.dz;
    const double hi = std::min(p1.zg.z_max(), p2.zg.z_max() - s) - 2.0 * p1.zg.dz;
    if (hi <= lo) throw DomainError("aligned fronts do not overlap");

    double dist = 0.0;
    const std::size_t ny = p1.mesh.n();
    for (std::size_t j = 0; j < p1.zg.n; ++j) {
        const double z = p1.zg.z(j);
        if (z < lo || z > hi) continue;
        const double t = (z + s - p2.zg.z_min()) / p2.zg.dz;
        const std::size_t k = static_cast<std::size_t>(std::clamp(
            std::floor(t), 0.0, static_cast<double>(p2.zg.n) - 2.0));
        const double frac = t - static_cast<double>(k);
        for (std::size_t i = 0; i < ny; ++i) {
            const double v2 = (1.0 - frac) * p2.u.at(k, i) + frac * p2.u.at(k + 1, i);
            dist = std::max(dist, std::fabs(p1.u.at(j, i) - v2));
        }
    }
    return dist;
}

void attach_plateau(FrontProfile& p, const ReactionTerm& term) {
    const std::size_t ny = p.mesh.n();
    std::vector<double> col(ny, 0.0);
    for (std::size_t i = 0; i < ny; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 3 && j < p.zg.n; ++j) acc += p.u.at(j, i);
        col[i] = acc / 3.0;
    }
    double vmax = 0.0;
    for (double x : col) vmax = std::max(vmax, x);
    p.plateau_value = vmax;
    p.plateau.reset();
    double best = 1e300;
    for (const Equilibrium& eq : enumerate_equilibria(term, p.mesh)) {
        double d = 0.0;
        for (std::size_t i = 0; i < ny; ++i) d = std::max(d, std::fabs(col[i] - eq.v[i]));
        if (d < best) {
            best = d;
            if (d < 1e-2) p.plateau = eq;
        }
    }
}

GridField resample_z(const GridField& u, const ZGrid& from, const ZGrid& to) {
    GridField out;
    out.ny = u.ny;
    out.v.assign(to.n * u.ny, 0.0);
    for (std::size_t j = 0; j < to.n; ++j) {
        const double t = (to.z(j) - from.z0) / from.dz;
        const double tc = std::clamp(t, 0.0, static_cast<double>(from.n - 1));
        const std::size_t k = static_cast<std::size_t>(
            std::min(std::floor(tc), static_cast<double>(from.n - 2)));
        const double frac = tc - static_cast<double>(k);
        for (std::size_t i = 0; i < u.ny; ++i)
            out.at(j, i) = (1.0 - frac) * u.at(k, i) + frac * u.at(k + 1, i);
    }
    return out;
}

GridField monotone_rearrangement_z(const GridField& u) {
    GridField out = u;
    const std::size_t ny = u.ny, nz = u.nz();
    std::vector<double> col(nz);
    for (std::size_t i = 0; i < ny; ++i) {
        for (std::size_t j = 0; j < nz; ++j) col[j] = u.at(j, i);
        std::sort(col.begin(), col.end(), std::greater<double>());
        for (std::size_t j = 0; j < nz; ++j) out.at(j, i) = col[j];
    }
    return out;
}

} // namespace frontlab
