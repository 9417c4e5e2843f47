#include "frontlab/cross_section.hpp"

#include "frontlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

CrossSectionMesh CrossSectionMesh::point() {
    CrossSectionMesh m;
    m.dim_ = 0;
    m.y_ = {0.0};
    m.qw_ = {1.0};
    m.measure_ = 1.0;
    return m;
}

CrossSectionMesh CrossSectionMesh::interval(double y_a, double y_b, std::size_t n_nodes,
                                            BoundaryTag bc_left, BoundaryTag bc_right) {
    if (!(y_b > y_a)) throw DomainError("cross-section interval must have y_b > y_a");
    if (n_nodes < 10) throw DomainError("interval mesh needs at least 8 interior nodes");
    CrossSectionMesh m;
    m.dim_ = 1;
    m.y_a_ = y_a;
    m.y_b_ = y_b;
    m.bc_left_ = bc_left;
    m.bc_right_ = bc_right;
    m.hy_ = (y_b - y_a) / static_cast<double>(n_nodes - 1);
    m.y_.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) m.y_[i] = y_a + m.hy_ * i;
    m.y_.back() = y_b;
    m.qw_.assign(n_nodes, m.hy_);
    m.qw_.front() = 0.5 * m.hy_;
    m.qw_.back() = 0.5 * m.hy_;
    m.measure_ = y_b - y_a;
    return m;
}

bool CrossSectionMesh::dirichlet_node(std::size_t i) const {
    if (dim_ == 0) return false;
    if (i == 0) return bc_left_ == BoundaryTag::Dirichlet;
    if (i + 1 == y_.size()) return bc_right_ == BoundaryTag::Dirichlet;
    return false;
}

bool CrossSectionMesh::operator==(const CrossSectionMesh& o) const {
    return dim_ == o.dim_ && y_.size() == o.y_.size() && y_a_ == o.y_a_ && y_b_ == o.y_b_ &&
           bc_left_ == o.bc_left_ && bc_right_ == o.bc_right_;
}

double lap_y(const CrossSectionMesh& mesh, const std::vector<double>& v, std::size_t i) {
    if (mesh.dim() == 0) return 0.0;
    const double h2 = mesh.hy() * mesh.hy();
    const std::size_t n = mesh.n();
    const double vc = v[i];
    double vl, vr;
    if (i == 0)
        vl = (mesh.bc_left() == BoundaryTag::Neumann) ? v[1] : 0.0;
    else
        vl = v[i - 1];
    if (i + 1 == n)
        vr = (mesh.bc_right() == BoundaryTag::Neumann) ? v[n - 2] : 0.0;
    else
        vr = v[i + 1];
    return (vl - 2.0 * vc + vr) / h2;
}

namespace {

// Thomas solve of a tridiagonal system; diag/sub/sup are overwritten.
void tridiag_solve(std::vector<double>& sub, std::vector<double>& diag,
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

struct ActiveMap {
    std::vector<std::size_t> nodes;  // mesh indices of unknowns
    std::vector<double> w;           // quadrature weight per unknown
};

ActiveMap active_map(const CrossSectionMesh& mesh) {
    ActiveMap am;
    for (std::size_t i = 0; i < mesh.n(); ++i) {
        if (mesh.dirichlet_node(i)) continue;
        am.nodes.push_back(i);
        am.w.push_back(mesh.quad_weights()[i]);
    }
    return am;
}

// Apply A = -Lap_y - p on the active unknowns.
void apply_operator(const CrossSectionMesh& mesh, const std::vector<double>& p,
                    const ActiveMap& am, const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t n = mesh.n();
    std::vector<double> full(n, 0.0);
    for (std::size_t k = 0; k < am.nodes.size(); ++k) full[am.nodes[k]] = x[k];
    out.resize(am.nodes.size());
    for (std::size_t k = 0; k < am.nodes.size(); ++k) {
        const std::size_t i = am.nodes[k];
        out[k] = -lap_y(mesh, full, i) - p[i] * full[i];
    }
}

} // namespace

double rayleigh_quotient(const CrossSectionMesh& mesh, const std::vector<double>& p,
                         const std::vector<double>& psi) {
    if (mesh.dim() == 0) return -p[0];
    double num = 0.0, den = 0.0;
    const double hy = mesh.hy();
    for (std::size_t i = 0; i + 1 < mesh.n(); ++i) {
        const double a = mesh.dirichlet_node(i) ? 0.0 : psi[i];
        const double b = mesh.dirichlet_node(i + 1) ? 0.0 : psi[i + 1];
        const double d = (b - a) / hy;
        num += d * d * hy;
    }
    for (std::size_t i = 0; i < mesh.n(); ++i) {
        if (mesh.dirichlet_node(i)) continue;
        const double w = mesh.quad_weights()[i];
        num -= w * p[i] * psi[i] * psi[i];
        den += w * psi[i] * psi[i];
    }
    return num / den;
}

double eigen_residual(const CrossSectionMesh& mesh, const std::vector<double>& p,
                      const EigenPair& ep) {
    if (mesh.dim() == 0) return std::fabs(-p[0] - ep.nu);
    double r = 0.0;
    for (std::size_t i = 0; i < mesh.n(); ++i) {
        if (mesh.dirichlet_node(i)) continue;
        r = std::max(r, std::fabs(lap_y(mesh, ep.psi, i) + p[i] * ep.psi[i] + ep.nu * ep.psi[i]));
    }
    return r;
}

EigenPair principal_eigenpair(const CrossSectionMesh& mesh, const std::vector<double>& p) {
    if (p.size() != mesh.n()) throw DomainError("potential must be tabulated on mesh nodes");
    EigenPair ep;
    if (mesh.dim() == 0) {
        ep.nu = -p[0];
        ep.psi = {1.0};
        return ep;
    }

    const ActiveMap am = active_map(mesh);
    const std::size_t m = am.nodes.size();
    double pmax = 0.0;
    for (double v : p) pmax = std::max(pmax, std::fabs(v));
    const double shift = -pmax - 1.0;
    const double h2 = mesh.hy() * mesh.hy();

    // (A - shift) rows in the active numbering. Neumann boundary rows couple
    // twice to the single interior neighbor (mirror ghost).
    std::vector<double> sub0(m, 0.0), diag0(m, 0.0), sup0(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = am.nodes[k];
        diag0[k] = 2.0 / h2 - p[i] - shift;
        double cl = -1.0 / h2, cr = -1.0 / h2;
        if (i == 0) cr = -2.0 / h2;           // Neumann mirror at left end
        if (i + 1 == mesh.n()) cl = -2.0 / h2;
        if (k > 0) sub0[k] = cl;
        if (k + 1 < m) sup0[k] = cr;
    }

    std::vector<double> x(m, 1.0), ax;
    double nu_prev = 1e300;
    const int max_iter = 10000;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<double> sub = sub0, diag = diag0, sup = sup0, rhs = x;
        tridiag_solve(sub, diag, sup, rhs);
        double norm = 0.0;
        for (std::size_t k = 0; k < m; ++k) norm += am.w[k] * rhs[k] * rhs[k];
        norm = std::sqrt(norm);
        for (double& v : rhs) v /= norm;
        x = rhs;

        apply_operator(mesh, p, am, x, ax);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            num += am.w[k] * x[k] * ax[k];
            den += am.w[k] * x[k] * x[k];
        }
        const double nu = num / den;
        ep.iterations = it;
        if (std::fabs(nu - nu_prev) <= 1e-12 * std::max(1.0, std::fabs(nu))) {
            nu_prev = nu;
            break;
        }
        nu_prev = nu;
        if (it == max_iter)
            throw ConvergenceError("principal eigenpair did not converge", nu);
    }

    // Assemble sup-normalized positive eigenfunction on all mesh nodes.
    ep.psi.assign(mesh.n(), 0.0);
    for (std::size_t k = 0; k < m; ++k) ep.psi[am.nodes[k]] = x[k];
    double amax = 0.0;
    double signed_max = 0.0;
    for (double v : ep.psi)
        if (std::fabs(v) > amax) { amax = std::fabs(v); signed_max = v; }
    if (amax == 0.0) throw ConvergenceError("eigenfunction collapsed to zero", nu_prev);
    for (double& v : ep.psi) v /= signed_max;
    ep.nu = rayleigh_quotient(mesh, p, ep.psi);
    return ep;
}

} // namespace frontlab
