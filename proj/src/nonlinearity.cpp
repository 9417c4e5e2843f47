#include "frontlab/nonlinearity.hpp"

#include "frontlab/cross_section.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/polyroots.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

namespace {
constexpr double kJoinTol = 1e-12;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (c.size() <= 1) {
        d.c = {0.0};
        return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = c[k] * static_cast<double>(k);
    return d;
}

Polynomial Polynomial::antiderivative() const {
    Polynomial a;
    a.c.resize(c.size() + 1);
    a.c[0] = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) a.c[k + 1] = c[k] / static_cast<double>(k + 1);
    return a;
}

Polynomial Polynomial::shifted(double x0) const {
    // Repeated synthetic division: t-coefficients of p(x0 + t).
    Polynomial out;
    out.c = c;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t k = n - 1; k-- > i;)
            out.c[k] += out.c[k + 1] * x0;
    return out;
}

std::vector<double> poly_real_roots(const Polynomial& p, double lo, double hi, double tol) {
    std::vector<double> roots;
    std::vector<double> c = p.c;
    while (c.size() > 1 && std::fabs(c.back()) < 1e-300) c.pop_back();
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::fabs(v));
    if (c.size() <= 1 || scale == 0.0) return roots;  // constant: no isolated roots

    Polynomial q{c};
    Polynomial dq = q.derivative();
    auto push = [&](double r) {
        if (r < lo - tol || r > hi + tol) return;
        r = std::clamp(r, lo, hi);
        for (double e : roots)
            if (std::fabs(e - r) < 1e-9 * std::max(1.0, hi - lo)) return;
        roots.push_back(r);
    };

    if (c.size() == 2) {
        push(-c[0] / c[1]);
    } else if (c.size() == 3) {
        const double a = c[2], b = c[1], d = c[0];
        const double disc = b * b - 4 * a * d;
        if (disc >= 0) {
            const double s = std::sqrt(disc);
            const double q1 = -0.5 * (b + (b >= 0 ? s : -s));
            push(q1 / a);
            if (q1 != 0.0) push(d / q1);
            else push(0.0);
        }
    } else {
        const int m = 256 * static_cast<int>(c.size());
        double prev = q(lo);
        double xprev = lo;
        for (int i = 1; i <= m; ++i) {
            const double x = lo + (hi - lo) * i / m;
            const double v = q(x);
            if (prev == 0.0) push(xprev);
            if (prev * v < 0.0) {
                double a = xprev, b = x, fa = prev;
                for (int it = 0; it < 200 && b - a > tol; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = q(mid);
                    if (fa * fm <= 0.0) b = mid;
                    else { a = mid; fa = fm; }
                }
                double r = 0.5 * (a + b);
                for (int it = 0; it < 8; ++it) {
                    const double dv = dq(r);
                    if (dv == 0.0) break;
                    const double step = q(r) / dv;
                    if (!std::isfinite(step)) break;
                    r -= step;
                    if (std::fabs(step) < tol) break;
                }
                push(r);
            }
            prev = v;
            xprev = x;
        }
        if (q(hi) == 0.0) push(hi);
        // Even-order roots sit at critical points where p vanishes.
        for (double x : poly_real_roots(dq, lo, hi, tol))
            if (std::fabs(q(x)) <= 1e-11 * std::max(1.0, scale)) push(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

ReactionTerm::ReactionTerm(std::vector<Piece> pieces, double holder_gamma)
    : pieces_(std::move(pieces)), gamma_(holder_gamma) {
    if (pieces_.empty()) throw DomainError("reaction term needs at least one piece");
    if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw DomainError("holder gamma must be in (0,1]");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    if (std::fabs(pieces_.front().lo) > kJoinTol || std::fabs(pieces_.back().hi - 1.0) > kJoinTol)
        throw DomainError("pieces must cover [0,1]");
    pieces_.front().lo = 0.0;
    pieces_.back().hi = 1.0;
    for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) {
        if (std::fabs(pieces_[k].hi - pieces_[k + 1].lo) > kJoinTol)
            throw DomainError("pieces must cover [0,1] with no gaps");
        const double mid = 0.5 * (pieces_[k].hi + pieces_[k + 1].lo);
        pieces_[k].hi = mid;
        pieces_[k + 1].lo = mid;
    }
    for (const Piece& p : pieces_) {
        if (!(p.hi > p.lo)) throw DomainError("empty piece interval");
        if (!p.y_factor.empty()) {
            y_dependent_ = true;
            if (ny_ == 1) ny_ = p.y_factor.size();
            if (p.y_factor.size() != ny_) throw DomainError("inconsistent y_factor lengths");
        }
    }

    dpieces_.reserve(pieces_.size());
    vpieces_.reserve(pieces_.size());
    for (const Piece& p : pieces_) {
        dpieces_.push_back(p.f.derivative());
        vpieces_.push_back(p.f.antiderivative());
    }

    // Continuity of f across joins, for every tabulated y.
    for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) {
        const double b = pieces_[k].hi;
        for (std::size_t iy = 0; iy < ny_; ++iy) {
            const double left = y_scale(pieces_[k], iy) * pieces_[k].f(b);
            const double right = y_scale(pieces_[k + 1], iy) * pieces_[k + 1].f(b);
            if (std::fabs(left - right) > kJoinTol)
                throw DomainError("f is discontinuous across a piece boundary");
        }
    }

    // Offsets making V(u,y) = -int_0^u f continuous with V(0,y) = 0.
    v_offsets_.assign(pieces_.size(), std::vector<double>(ny_, 0.0));
    for (std::size_t iy = 0; iy < ny_; ++iy) {
        double acc = 0.0;
        for (std::size_t k = 0; k < pieces_.size(); ++k) {
            v_offsets_[k][iy] = acc;
            acc -= y_scale(pieces_[k], iy) * (vpieces_[k](pieces_[k].hi) - vpieces_[k](pieces_[k].lo));
        }
    }
}

ReactionTerm ReactionTerm::example61() {
    Piece p1{0.0, 0.5, Polynomial{{0.0, 1.0, -2.0}}, {}};
    Piece p2{0.5, 1.0, Polynomial{{21.0, -103.0, 162.0, -80.0}}, {}};
    return ReactionTerm({p1, p2});
}

ReactionTerm ReactionTerm::kpp() {
    return ReactionTerm({Piece{0.0, 1.0, Polynomial{{0.0, 1.0, -1.0}}, {}}});
}

ReactionTerm ReactionTerm::logistic_half() {
    return ReactionTerm({Piece{0.0, 1.0, Polynomial{{0.0, 1.0, -2.0}}, {}}});
}

std::size_t ReactionTerm::piece_index(double u) const {
    // Breakpoints resolve to the right piece; u = 1 to the last.
    std::size_t k = pieces_.size() - 1;
    while (k > 0 && u < pieces_[k].lo) --k;
    return k;
}

ReactionValues ReactionTerm::eval(double u, std::size_t iy) const {
    if (u < -kJoinTol || u > 1.0 + kJoinTol)
        throw DomainError("reaction term evaluated outside [0,1]");
    u = std::clamp(u, 0.0, 1.0);
    const std::size_t k = piece_index(u);
    const double s = y_scale(pieces_[k], iy);
    ReactionValues out;
    out.f = s * pieces_[k].f(u);
    out.fu = s * dpieces_[k](u);
    out.V = v_offsets_[k][iy] - s * (vpieces_[k](u) - vpieces_[k](pieces_[k].lo));
    return out;
}

double ReactionTerm::f(double u, std::size_t iy) const { return eval(u, iy).f; }
double ReactionTerm::fu(double u, std::size_t iy) const { return eval(u, iy).fu; }
double ReactionTerm::V(double u, std::size_t iy) const { return eval(u, iy).V; }

double ReactionTerm::fu_left(double u, std::size_t iy) const {
    if (u <= 0.0) return fu(0.0, iy);
    std::size_t k = 0;
    while (k + 1 < pieces_.size() && pieces_[k].hi < u) ++k;
    return y_scale(pieces_[k], iy) * dpieces_[k](u);
}

double ReactionTerm::fu_right(double u, std::size_t iy) const {
    const std::size_t k = piece_index(u);
    return y_scale(pieces_[k], iy) * dpieces_[k](u);
}

std::vector<double> ReactionTerm::q_profile(const CrossSectionMesh& mesh, int n_samples) const {
    if (n_samples < 2) throw DomainError("q_profile needs n_samples >= 2");
    const std::size_t ny = mesh.n();
    if (y_dependent_ && ny != ny_) throw DomainError("mesh size does not match y_factor tables");
    std::vector<double> q(ny, -1e300);

    // Candidate u values: piece endpoints, interior critical points of f_u,
    // and the uniform sample grid. The candidate set does not depend on y.
    std::vector<double> cand;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        cand.push_back(pieces_[k].lo);
        cand.push_back(pieces_[k].hi);
        for (double r : poly_real_roots(dpieces_[k].derivative(), pieces_[k].lo, pieces_[k].hi))
            cand.push_back(r);
    }
    for (int i = 0; i < n_samples; ++i)
        cand.push_back(static_cast<double>(i) / (n_samples - 1));

    for (std::size_t iy = 0; iy < ny; ++iy)
        for (double u : cand)
            q[iy] = std::max(q[iy], fu_right(std::clamp(u, 0.0, 1.0), iy));
    // Breakpoint left limits can exceed the right limits when f_u jumps.
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t k = 0; k + 1 < pieces_.size(); ++k)
            q[iy] = std::max(q[iy], fu_left(pieces_[k].hi, iy));
    return q;
}

HypothesisReport ReactionTerm::check_hypotheses(const CrossSectionMesh& mesh) const {
    HypothesisReport rep;
    const std::size_t ny = mesh.n();

    rep.h1_zero_at_origin = true;
    rep.h1_sign_at_one = true;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        if (std::fabs(f(0.0, iy)) > kJoinTol) rep.h1_zero_at_origin = false;
        if (f(1.0, iy) > kJoinTol) rep.h1_sign_at_one = false;
    }

    rep.h2_f_continuous = true;  // construction enforces it
    rep.h2_fu_continuous = true;
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t k = 0; k + 1 < pieces_.size(); ++k)
            if (std::fabs(fu_left(pieces_[k].hi, iy) - fu_right(pieces_[k].hi, iy)) > 1e-9)
                rep.h2_fu_continuous = false;
    rep.holder_quotient = holder_constant();
    rep.h2_pass_at_resolution = rep.h2_f_continuous && rep.h2_fu_continuous &&
                                std::isfinite(rep.holder_quotient);

    std::vector<double> p(ny);
    for (std::size_t iy = 0; iy < ny; ++iy) p[iy] = fu(0.0, iy);
    const EigenPair ep = principal_eigenpair(mesh, p);
    rep.nu0 = ep.nu;
    rep.u_pass = ep.nu < 0.0;
    return rep;
}

double ReactionTerm::holder_constant(std::size_t n_grid) const {
    double best = 0.0;
    for (std::size_t iy = 0; iy < ny_; ++iy) {
        const double fu0 = fu(0.0, iy);
        for (std::size_t i = 1; i <= n_grid; ++i) {
            const double u = static_cast<double>(i) / n_grid;
            best = std::max(best, std::fabs(fu_right(u, iy) - fu0) / std::pow(u, gamma_));
        }
    }
    return best;
}

LocalExpansion ReactionTerm::v_expansion(double u0, std::size_t iy) const {
    const std::size_t k = piece_index(std::clamp(u0, 0.0, 1.0));
    LocalExpansion ex;
    ex.u0 = u0;
    ex.gap_lo = u0 - pieces_[k].lo;
    ex.gap_hi = pieces_[k].hi - u0;
    const double s = y_scale(pieces_[k], iy);
    // V restricted to the piece is -s*F(u) + const; Taylor coefficients of
    // order >= 2 about u0 give the divided second difference directly.
    Polynomial shifted = vpieces_[k].shifted(u0);
    ex.nq = std::max(0, static_cast<int>(shifted.c.size()) - 2);
    for (int m = 0; m < ex.nq && m < 8; ++m) ex.vq[m] = -s * shifted.c[m + 2];
    ex.nq = std::min(ex.nq, 8);
    return ex;
}

double ReactionTerm::v_remainder2(const LocalExpansion& ex, double h, std::size_t iy) const {
    if (h >= -ex.gap_lo && h <= ex.gap_hi) {
        double acc = 0.0;
        for (int m = ex.nq; m-- > 0;) acc = acc * h + ex.vq[m];
        return acc;
    }
    const ReactionValues a = eval(ex.u0, iy);
    const ReactionValues b = eval(ex.u0 + h, iy);
    return (b.V - a.V + a.f * h) / (h * h);
}

double ReactionTerm::v_dremainder(const LocalExpansion& ex, double h, std::size_t iy) const {
    if (h >= -ex.gap_lo && h <= ex.gap_hi) {
        double acc = 0.0;
        for (int m = ex.nq; m-- > 0;) acc = acc * h + ex.vq[m] * (m + 2);
        return acc;
    }
    const ReactionValues a = eval(ex.u0, iy);
    const ReactionValues b = eval(ex.u0 + h, iy);
    return (a.f - b.f) / h;
}

} // namespace frontlab
