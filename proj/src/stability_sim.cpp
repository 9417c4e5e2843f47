#include "frontlab/stability_sim.hpp"

#include "frontlab/errors.hpp"
#include "frontlab/kernels.hpp"
#include "frontlab/speed_theory.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

double predicted_rate(double c, double c_prime, double nu_hat) {
    const auto [lm, lp] = lambda_pm(c, nu_hat);
    if (!(c_prime > 2.0 * lm && c_prime < 2.0 * lp))
        throw DomainError("c' outside (2 lambda_-, 2 lambda_+) for nu_hat");
    return -0.5 * (c_prime - 2.0 * lm) * (c_prime - 2.0 * lp);
}

std::function<double(double, std::size_t)> bump_perturbation(const FrontProfile& front,
                                                             double amplitude, double center,
                                                             double width) {
    std::vector<double> shape = front.psi0;
    return [=](double z, std::size_t iy) {
        const double t = (z - center) / width;
        return amplitude * std::exp(-0.5 * t * t) * shape[iy];
    };
}

PerturbationState evolve(const FrontProfile& front, const ReactionTerm& term,
                         const std::function<double(double, std::size_t)>& w0,
                         double c_prime, const EvolveOptions& opts) {
    const CrossSectionMesh& mesh = front.mesh;
    const std::size_t ny = mesh.n();
    const double dz = front.zg.dz;
    const double dt = (opts.dt > 0.0) ? opts.dt : 0.25 * dz * dz;
    if (dt > 0.4 * dz * dz + 1e-18)
        throw DomainError("dt above the explicit diffusion stability bound 0.4 dz^2");
    {
        const auto [lm, lp] = lambda_pm(front.c, opts.nu_hat);
        if (!(c_prime > 2.0 * lm && c_prime < 2.0 * lp))
            throw DomainError("c' outside the admissible weighted-norm window");
    }

    // Restrict to the window where the tilt is representable.
    const double zcap = 600.0 / std::max(c_prime, 1e-9);
    std::size_t ja = 0, jb = front.zg.n - 1;
    while (front.zg.z(ja) < -zcap) ++ja;
    while (front.zg.z(jb) > zcap) --jb;
    ZGrid zg;
    zg.dz = dz;
    zg.z0 = front.zg.z(ja);
    zg.n = jb - ja + 1;
    const std::size_t nz = zg.n;

    std::vector<double> ezm2(nz), ezp2(nz);
    for (std::size_t j = 0; j < nz; ++j) {
        ezm2[j] = std::exp(-0.5 * c_prime * zg.z(j));
        ezp2[j] = 1.0 / ezm2[j];
    }

    // Tilted initial data; Dirichlet at the window ends.
    PerturbationState st;
    st.zg = zg;
    st.omega.ny = ny;
    st.omega.v.assign(nz * ny, 0.0);
    std::vector<double> ubar(nz * ny);
    std::vector<LocalExpansion> vex(nz * ny);
    for (std::size_t j = 0; j < nz; ++j)
        for (std::size_t i = 0; i < ny; ++i) {
            const std::size_t k = j * ny + i;
            ubar[k] = front.u.at(ja + j, i);
            vex[k] = term.v_expansion(std::clamp(ubar[k], 0.0, 1.0), i);
            if (j == 0 || j + 1 == nz || mesh.dirichlet_node(i)) continue;
            st.omega.v[k] = w0(zg.z(j), i) * ezp2[j];
        }

    std::vector<double> sigma(nz, dz);
    sigma.front() = sigma.back() = 0.5 * dz;
    const std::vector<double>& qw = mesh.quad_weights();
    auto norm2 = [&]() {
        double acc = 0.0;
        for (std::size_t j = 0; j < nz; ++j)
            for (std::size_t i = 0; i < ny; ++i)
                acc += sigma[j] * qw[i] * st.omega.v[j * ny + i] * st.omega.v[j * ny + i];
        return acc;
    };

    const double inv_dz2 = 1.0 / (dz * dz);
    const double adv = (front.c - c_prime) / (2.0 * dz);
    const double shift = 0.25 * c_prime * c_prime - 0.5 * front.c * c_prime;
    const double n0 = norm2();
    st.history.emplace_back(0.0, n0);

    std::vector<double> rate(nz * ny);
    std::vector<double> lap(nz * ny, 0.0);
    const long steps = std::lround(opts.t_end / dt);
    std::vector<double> col(ny);

    for (long s = 1; s <= steps; ++s) {
        std::vector<double>& om = st.omega.v;
        // pointwise reaction slope around the frozen front
        for (std::size_t j = 0; j < nz; ++j)
            for (std::size_t i = 0; i < ny; ++i) {
                const std::size_t k = j * ny + i;
                const double h = (om[k] == 0.0) ? 0.0 : ezm2[j] * om[k];
                rate[k] = -term.v_dremainder(vex[k], h, i);  // (f(u+h)-f(u))/h
            }
        if (ny == 1) {
            kernels::ops().stencil3(om.data(), lap.data(), nz,
                                    inv_dz2 - adv, -2.0 * inv_dz2, inv_dz2 + adv);
        } else {
            for (std::size_t j = 1; j + 1 < nz; ++j)
                for (std::size_t i = 0; i < ny; ++i) {
                    const std::size_t k = j * ny + i;
                    lap[k] = (inv_dz2 - adv) * om[k - ny] - 2.0 * inv_dz2 * om[k] +
                             (inv_dz2 + adv) * om[k + ny];
                }
        }
        for (std::size_t j = 1; j + 1 < nz; ++j) {
            if (ny > 1)
                for (std::size_t i = 0; i < ny; ++i) col[i] = om[j * ny + i];
            for (std::size_t i = 0; i < ny; ++i) {
                const std::size_t k = j * ny + i;
                if (mesh.dirichlet_node(i)) continue;
                double d = lap[k] + (shift + rate[k]) * om[k];
                if (ny > 1) d += lap_y(mesh, col, i);
                om[k] += dt * d;
                // clip so the total stays in [0,1]
                const double utot = ubar[k] + ezm2[j] * om[k];
                if (utot < 0.0 || utot > 1.0) {
                    om[k] = (std::clamp(utot, 0.0, 1.0) - ubar[k]) * ezp2[j];
                    ++st.clip_count;
                }
            }
        }
        if (s % opts.record_every == 0 || s == steps) {
            const double n2 = norm2();
            st.history.emplace_back(dt * static_cast<double>(s), n2);
            if (!(n2 < opts.blowup_factor * opts.blowup_factor * (n0 + 1e-300)))
                throw Error("perturbation norm grew beyond the instability threshold");
        }
    }
    st.t = opts.t_end;

    // Decay exponent of the squared norm from the last half of the history.
    const std::size_t h0 = st.history.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = h0; k < st.history.size(); ++k) {
        const auto [t, n2] = st.history[k];
        if (!(n2 > 0.0)) continue;
        const double y = std::log(n2);
        sx += t; sy += y; sxx += t * t; sxy += t * y;
        ++m;
    }
    if (m >= 2) {
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        st.sigma_measured = -slope;
    }
    return st;
}

} // namespace frontlab
