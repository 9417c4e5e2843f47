#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace frontlab {

class CrossSectionMesh;

// Dense polynomial, coefficients in ascending powers.
struct Polynomial {
    std::vector<double> c;

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    }
    Polynomial derivative() const;
    // Antiderivative with zero constant term.
    Polynomial antiderivative() const;
    // Coefficients of p(x0 + t) as a polynomial in t.
    Polynomial shifted(double x0) const;
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

struct Piece {
    double lo = 0.0, hi = 1.0;
    Polynomial f;                  // reaction polynomial on [lo, hi]
    std::vector<double> y_factor;  // optional per-node multiplier; empty = 1
};

struct HypothesisReport {
    bool h1_zero_at_origin = false;  // f(0,y) = 0
    bool h1_sign_at_one = false;     // f(1,y) <= 0
    bool h2_f_continuous = false;
    bool h2_fu_continuous = false;
    double holder_quotient = 0.0;    // sampled sup |f_u(u,y)-f_u(0,y)| / u^gamma
    bool h2_pass_at_resolution = false;
    bool u_pass = false;             // nu_0 < 0
    double nu0 = 0.0;
    bool all_pass() const {
        return h1_zero_at_origin && h1_sign_at_one && h2_pass_at_resolution && u_pass;
    }
};

// Values of f, f_u and the potential V(u,y) = -int_0^u f at one point.
struct ReactionValues {
    double f = 0.0;
    double fu = 0.0;
    double V = 0.0;
};

// Taylor data of V about a base point u0 on the piece containing u0. Used by
// the solvers to evaluate divided second differences of V without
// cancellation when |h| is tiny.
struct LocalExpansion {
    double u0 = 0.0;
    double gap_lo = 0.0;    // u0 - piece.lo
    double gap_hi = 0.0;    // piece.hi - u0
    // vq[m] = V^(m+2)(u0) / (m+2)!  so that
    //   (V(u0+h) - V(u0) - V'(u0) h) / h^2 = sum_m vq[m] h^m.
    std::array<double, 8> vq{};
    int nq = 0;
};

class ReactionTerm {
public:
    ReactionTerm(std::vector<Piece> pieces, double holder_gamma = 1.0);

    static ReactionTerm example61();
    static ReactionTerm kpp();
    // f(u) = u(1-2u) extended over all of [0,1].
    static ReactionTerm logistic_half();

    const std::vector<Piece>& pieces() const { return pieces_; }
    double holder_gamma() const { return gamma_; }
    bool y_dependent() const { return y_dependent_; }

    // u must lie in [0,1]; iy indexes the cross-section node.
    ReactionValues eval(double u, std::size_t iy = 0) const;
    double f(double u, std::size_t iy = 0) const;
    double fu(double u, std::size_t iy = 0) const;
    double V(double u, std::size_t iy = 0) const;
    // One-sided derivatives at piece breakpoints (equal elsewhere).
    double fu_left(double u, std::size_t iy = 0) const;
    double fu_right(double u, std::size_t iy = 0) const;

    // q(y) = max over s in [0,1] of f_u(s,y); exact for polynomial pieces,
    // with an n_samples uniform grid merged in.
    std::vector<double> q_profile(const CrossSectionMesh& mesh, int n_samples = 256) const;

    HypothesisReport check_hypotheses(const CrossSectionMesh& mesh) const;

    // Sampled sup of |f_u(u,y) - f_u(0,y)| / u^gamma over a uniform u-grid.
    // Serves as the constant K in |f(u,y) - f_u(0,y) u| <= K u^(1+gamma).
    double holder_constant(std::size_t n_grid = 10000) const;

    LocalExpansion v_expansion(double u0, std::size_t iy = 0) const;
    // (V(u0+h) - V(u0) - V'(u0)h)/h^2, stable for all h with u0, u0+h in [0,1].
    double v_remainder2(const LocalExpansion& ex, double h, std::size_t iy = 0) const;
    // (V'(u0+h) - V'(u0))/h under the same contract.
    double v_dremainder(const LocalExpansion& ex, double h, std::size_t iy = 0) const;

    std::size_t piece_index(double u) const;

private:
    double y_scale(const Piece& p, std::size_t iy) const {
        return p.y_factor.empty() ? 1.0 : p.y_factor[iy];
    }

    std::vector<Piece> pieces_;
    std::vector<Polynomial> dpieces_;   // f_u per piece
    std::vector<Polynomial> vpieces_;   // antiderivative of f per piece, raw
    std::vector<std::vector<double>> v_offsets_;  // [piece][iy] so V is continuous
    double gamma_ = 1.0;
    bool y_dependent_ = false;
    std::size_t ny_ = 1;
};

} // namespace frontlab
