#include "frontlab/equilibria.hpp"

#include "frontlab/errors.hpp"
#include "frontlab/gridops.hpp"
#include "frontlab/polyroots.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

double equilibrium_energy(const ReactionTerm& term, const CrossSectionMesh& mesh,
                          const std::vector<double>& v) {
    double e = 0.0;
    for (std::size_t i = 0; i < mesh.n(); ++i)
        e += mesh.quad_weights()[i] * term.V(v[i], i);
    if (mesh.dim() == 1) {
        const double hy = mesh.hy();
        for (std::size_t i = 0; i + 1 < mesh.n(); ++i) {
            const double a = mesh.dirichlet_node(i) ? 0.0 : v[i];
            const double b = mesh.dirichlet_node(i + 1) ? 0.0 : v[i + 1];
            const double d = (b - a) / hy;
            e += 0.5 * d * d * hy;
        }
    }
    return e;
}

namespace {

std::vector<double> constant_roots(const ReactionTerm& term) {
    std::vector<double> roots;
    for (const Piece& p : term.pieces()) {
        for (double r : poly_real_roots(p.f, p.lo, p.hi)) {
            if (r <= 1e-12) continue;  // the zero state is not listed
            bool dup = false;
            for (double e : roots) dup = dup || std::fabs(e - r) < 1e-9;
            if (!dup) roots.push_back(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Newton solve of Lap_y v + f(v,y) = 0 from a constant seed (dim 1).
bool newton_equilibrium(const ReactionTerm& term, const CrossSectionMesh& mesh,
                        std::vector<double>& v) {
    const std::size_t n = mesh.n();
    const double h2 = mesh.hy() * mesh.hy();
    for (int it = 0; it < 200; ++it) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (!mesh.dirichlet_node(i)) idx.push_back(i);
        const std::size_t m = idx.size();
        std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
        double rsup = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = idx[k];
            const ReactionValues rv = term.eval(std::clamp(v[i], 0.0, 1.0), i);
            const double res = lap_y(mesh, v, i) + rv.f;
            rsup = std::max(rsup, std::fabs(res));
            rhs[k] = -res;
            diag[k] = -2.0 / h2 + rv.fu;
            double cl = 1.0 / h2, cr = 1.0 / h2;
            if (i == 0) cr = 2.0 / h2;
            if (i + 1 == n) cl = 2.0 / h2;
            if (k > 0) sub[k] = cl;
            if (k + 1 < m) sup[k] = cr;
        }
        if (rsup <= 1e-12) return true;
        tridiag_solve_inplace(sub, diag, sup, rhs);
        double step = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            v[idx[k]] += rhs[k];
            step = std::max(step, std::fabs(rhs[k]));
        }
        if (!std::isfinite(step) || step > 10.0) return false;
    }
    return false;
}

} // namespace

std::vector<Equilibrium> enumerate_equilibria(const ReactionTerm& term,
                                              const CrossSectionMesh& mesh) {
    std::vector<Equilibrium> out;
    for (double r : constant_roots(term)) {
        Equilibrium eq;
        eq.v.assign(mesh.n(), r);
        if (mesh.dim() == 1) {
            for (std::size_t i = 0; i < mesh.n(); ++i)
                if (mesh.dirichlet_node(i)) eq.v[i] = 0.0;
            eq.resolved = newton_equilibrium(term, mesh, eq.v);
            if (eq.resolved)
                for (double& x : eq.v) x = std::clamp(x, 0.0, 1.0);
        }
        double vmax = 0.0, rsup = 0.0;
        for (std::size_t i = 0; i < mesh.n(); ++i) {
            vmax = std::max(vmax, eq.v[i]);
            if (!mesh.dirichlet_node(i))
                rsup = std::max(rsup, std::fabs(lap_y(mesh, eq.v, i) + term.f(eq.v[i], i)));
        }
        eq.v_repr = vmax;
        eq.residual = rsup;
        if (eq.v_repr <= 1e-10) continue;
        eq.energy = equilibrium_energy(term, mesh, eq.v);

        // Transverse stability index from each one-sided derivative; they
        // differ only when f_u has a corner exactly at the equilibrium value.
        std::vector<double> pl(mesh.n()), pr(mesh.n());
        for (std::size_t i = 0; i < mesh.n(); ++i) {
            pl[i] = term.fu_left(eq.v[i], i);
            pr[i] = term.fu_right(eq.v[i], i);
        }
        eq.nu_tilde_left = principal_eigenpair(mesh, pl).nu;
        eq.nu_tilde_right = principal_eigenpair(mesh, pr).nu;
        out.push_back(std::move(eq));
    }
    std::sort(out.begin(), out.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.v_repr < b.v_repr; });
    for (auto& e : out) e.is_v1 = false;
    for (auto& e : out)
        if (e.resolved) { e.is_v1 = true; break; }
    return out;
}

std::optional<Equilibrium> find_v1(const ReactionTerm& term, const CrossSectionMesh& mesh) {
    for (auto& e : enumerate_equilibria(term, mesh))
        if (e.is_v1) return e;
    return std::nullopt;
}

} // namespace frontlab
