#include "frontlab/gridops.hpp"

#include "frontlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

std::size_t ZGrid::index_near(double zz) const {
    const double t = (zz - z0) / dz;
    const long k = std::lround(t);
    return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(n) - 1));
}

ZGrid ZGrid::over(double z_min, double z_max, double dz) {
    if (!(dz > 0.0) || !(z_max > z_min)) throw DomainError("bad z-grid request");
    ZGrid g;
    g.dz = dz;
    // Snap so that z = 0 is a node whenever the range straddles it.
    const long j_lo = static_cast<long>(std::floor(z_min / dz + 1e-12));
    const long j_hi = static_cast<long>(std::ceil(z_max / dz - 1e-12));
    g.z0 = dz * static_cast<double>(j_lo);
    g.n = static_cast<std::size_t>(j_hi - j_lo) + 1;
    if (g.n < 8) throw DomainError("z-grid too short");
    return g;
}

FittedStencil FittedStencil::make(double c, double dz) {
    FittedStencil s;
    const double inv = 1.0 / (dz * dz);
    s.cl = std::exp(-0.5 * c * dz) * inv;
    s.cr = std::exp(0.5 * c * dz) * inv;
    s.cc = -(s.cl + s.cr);
    return s;
}

void traveling_residual(const ReactionTerm& term, const CrossSectionMesh& mesh,
                        const ZGrid& zg, double c, const GridField& u, GridField& res,
                        std::size_t j_lo, std::size_t j_hi) {
    const std::size_t ny = mesh.n();
    res.ny = ny;
    res.v.assign(zg.n * ny, 0.0);
    const FittedStencil st = FittedStencil::make(c, zg.dz);
    std::vector<double> col(ny);
    j_lo = std::max<std::size_t>(j_lo, 1);
    j_hi = std::min<std::size_t>(j_hi, zg.n - 2);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        for (std::size_t i = 0; i < ny; ++i) col[i] = u.at(j, i);
        for (std::size_t i = 0; i < ny; ++i) {
            if (mesh.dirichlet_node(i)) continue;
            double r = st.cl * u.at(j - 1, i) + st.cc * u.at(j, i) + st.cr * u.at(j + 1, i);
            if (mesh.dim() == 1) r += lap_y(mesh, col, i);
            r += term.f(std::clamp(u.at(j, i), 0.0, 1.0), i);
            res.at(j, i) = r;
        }
    }
}

double residual_sup(const GridField& res, const CrossSectionMesh& mesh,
                    std::size_t j_lo, std::size_t j_hi) {
    double m = 0.0;
    const std::size_t ny = mesh.n();
    j_hi = std::min<std::size_t>(j_hi, res.nz() - 1);
    for (std::size_t j = j_lo; j <= j_hi; ++j)
        for (std::size_t i = 0; i < ny; ++i)
            if (!mesh.dirichlet_node(i)) m = std::max(m, std::fabs(res.at(j, i)));
    return m;
}

void tridiag_solve_inplace(std::vector<double>& sub, std::vector<double>& diag,
                           std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

namespace {

// One Newton step on a single cross-section column i over [j_lo, j_hi];
// y-neighbor terms enter the residual from the current iterate (lagged).
// Returns the squared norm of the Newton update.
double newton_line_step(const ReactionTerm& term, const CrossSectionMesh& mesh, const ZGrid& zg,
                        double c, GridField& u, std::size_t i, std::size_t j_lo, std::size_t j_hi,
                        bool neumann_left, double damping) {
    const FittedStencil st = FittedStencil::make(c, zg.dz);
    const std::size_t m = j_hi - j_lo + 1;
    std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
    std::vector<double> col(mesh.n());
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = j_lo + k;
        const double uj = u.at(j, i);
        double r = st.cc * uj;
        double dl = st.cl, dr = st.cr;
        if (j == j_lo && neumann_left) {
            r += (st.cl + st.cr) * u.at(j + 1, i);
            dr = st.cl + st.cr;
            dl = 0.0;
        } else {
            r += st.cl * u.at(j - 1, i) + st.cr * u.at(j + 1, i);
        }
        if (mesh.dim() == 1) {
            for (std::size_t ii = 0; ii < mesh.n(); ++ii) col[ii] = u.at(j, ii);
            r += lap_y(mesh, col, i);
        }
        const ReactionValues rv = term.eval(std::clamp(uj, 0.0, 1.0), i);
        r += rv.f;
        double dcc = st.cc + rv.fu;
        if (mesh.dim() == 1) dcc -= 2.0 / (mesh.hy() * mesh.hy());
        diag[k] = dcc;
        if (k > 0) sub[k] = dl;
        if (k + 1 < m) sup[k] = (j == j_lo && neumann_left) ? dr : st.cr;
        rhs[k] = -r;
    }
    tridiag_solve_inplace(sub, diag, sup, rhs);
    double nrm = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        u.at(j_lo + k, i) += damping * rhs[k];
        nrm += rhs[k] * rhs[k];
    }
    return nrm;
}

} // namespace

double newton_polish(const ReactionTerm& term, const CrossSectionMesh& mesh, const ZGrid& zg,
                     double c, GridField& u, std::size_t j_lo, std::size_t j_hi,
                     bool neumann_left, double tol, int max_iter) {
    GridField res;
    double last = 1e300;
    for (int it = 0; it < max_iter; ++it) {
        double upd = 0.0;
        for (std::size_t i = 0; i < mesh.n(); ++i) {
            if (mesh.dirichlet_node(i)) continue;
            upd += newton_line_step(term, mesh, zg, c, u, i, j_lo, j_hi, neumann_left, 1.0);
        }
        traveling_residual(term, mesh, zg, c, u, res,
                           neumann_left ? j_lo + 1 : j_lo, j_hi);
        last = residual_sup(res, mesh, neumann_left ? j_lo + 1 : j_lo, j_hi);
        if (last <= tol) break;
        if (!(upd < 1e12)) throw ConvergenceError("newton polish diverged", last);
    }
    return last;
}

} // namespace frontlab
