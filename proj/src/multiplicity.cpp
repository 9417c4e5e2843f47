#include "frontlab/multiplicity.hpp"

#include "frontlab/aux_front.hpp"
#include "frontlab/equilibria.hpp"
#include "frontlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Multiple: return "MULTIPLE";
        case Regime::UniqueCertified: return "UNIQUE_CERTIFIED";
        case Regime::UniqueObserved: return "UNIQUE_OBSERVED";
        default: return "UNKNOWN";
    }
}

std::vector<FrontProfile> bscan_fronts(const ReactionTerm& term, double c, const ZGrid& zg,
                                       int n_samples) {
    std::vector<FrontProfile> out;
    const double nu0 = -term.fu(0.0, 0);
    const auto [lm, lp] = lambda_pm(c, nu0);
    // Start where the slow mode has amplitude 1e-4 (a = 1); the scan variable
    // is the fast amplitude at z0 as a fraction of that.
    const double z0 = std::log(1e4) / lm;
    const double slow_at_z0 = std::exp(-lm * z0);
    const double bscale = std::exp(lp * z0);
    ShootOptions so;
    so.z_stop = std::max(zg.z_min(), -240.0);

    auto outcome = [&](double phi) {
        return shoot_1d(term, c, 0.0, 1.0, phi * slow_at_z0 * bscale, z0, so);
    };
    auto score = [&](const ShootOutcome& oc) {
        if (oc.kind == ShootKind::Plateau) return oc.plateau_v;
        double umax = -1e300;
        for (double u : oc.us) umax = std::max(umax, u);
        return umax;
    };

    std::vector<double> phis(n_samples);
    std::vector<double> scores(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        phis[k] = -0.95 + (3.0 + 0.95) * k / (n_samples - 1);
        scores[k] = score(outcome(phis[k]));
    }

    std::vector<double> targets;
    for (const Equilibrium& eq : enumerate_equilibria(term, CrossSectionMesh::point()))
        if (eq.nu_tilde() >= 0.0) targets.push_back(eq.v_repr);

    std::vector<std::pair<double, double>> found;  // (plateau, phi)
    for (double v : targets) {
        for (int k = 0; k + 1 < n_samples; ++k) {
            const double s0 = scores[k] - v, s1 = scores[k + 1] - v;
            if (!(s0 * s1 < 0.0)) continue;
            double a = phis[k], b = phis[k + 1];
            double sa = s0;
            double phi_star = 0.0;
            bool captured = false;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (a + b);
                const ShootOutcome oc = outcome(mid);
                if (oc.kind == ShootKind::Plateau && std::fabs(oc.plateau_v - v) < 1e-9) {
                    phi_star = mid;
                    captured = true;
                    break;
                }
                if ((score(oc) - v) * sa <= 0.0) b = mid;
                else { a = mid; sa = score(oc) - v; }
                if (b - a < 1e-15 * std::max(1.0, std::fabs(a))) break;
            }
            if (captured) {
                bool dup = false;
                for (auto& f : found) dup = dup || std::fabs(f.first - v) < 1e-9;
                if (!dup) found.emplace_back(v, phi_star);
            }
        }
    }

    for (auto& [v, phi] : found) {
        FrontProfile p = shoot_profile(term, c, 0.0, 1.0, phi * slow_at_z0 * bscale, z0, zg, so);
        p.provenance = "shoot-scan";
        out.push_back(std::move(p));
    }
    return out;
}

CensusReport front_census(const ReactionTerm& term, const CrossSectionMesh& mesh, double c,
                          const SpeedReport& speeds, const CensusOptions& opts) {
    CensusReport rep;
    rep.c = c;
    const double v1 = speeds.v1;
    const double c_dag = speeds.c_dag_v1 ? speeds.c_dag_v1->value : speeds.c_star.value;
    rep.expect_multiple = (c > speeds.c_star.value) && (c < c_dag);

    const ZGrid zg = make_front_grid(c, term, mesh, opts.grid);
    const AuxiliaryFront waux = build_w(c, term, mesh, zg);

    // Coarse-grid solves seed the fine-grid minimizations.
    std::optional<ZGrid> zg_coarse;
    std::optional<AuxiliaryFront> waux_coarse;
    if (opts.grid.dz < 0.019) {
        FrontGridSpec cg = opts.grid;
        cg.dz = 0.02;
        zg_coarse = make_front_grid(c, term, mesh, cg);
        waux_coarse = build_w(c, term, mesh, *zg_coarse);
    }

    MinimizeOptions mo;
    mo.spg = opts.spg;
    auto run_band = [&](const AuxiliaryFront& w, std::pair<double, double> band,
                        const std::optional<GridField>& warm) {
        MinimizeOptions m = mo;
        if (warm) {
            m.warm_start_u = warm;
        } else if (zg_coarse) {
            MinimizeOptions mc;
            mc.spg = opts.spg;
            const FrontProfile pc =
                minimize_front(term, mesh, *zg_coarse, c, *waux_coarse, band, mc);
            m.warm_start_u = resample_z(pc.u, *zg_coarse, zg);
        }
        return minimize_front(term, mesh, zg, c, w, band, m);
    };

    {
        FrontProfile p = run_band(waux, {0.0, v1}, std::nullopt);
        p.provenance = "band(0,v1)";
        rep.fronts.push_back(std::move(p));
    }
    {
        // Above c_sharp the unconfined minimizer coincides with the confined
        // one; seeding from it saves most of the solve.
        std::optional<GridField> warm;
        if (c > speeds.c_sharp) warm = rep.fronts.front().u;
        FrontProfile p = run_band(waux, {0.0, 1.0}, warm);
        p.provenance = "band(0,1)";
        rep.fronts.push_back(std::move(p));
    }
    if (c > speeds.c_sharp) {
        BuildWOptions bw;
        bw.boundary_scale = 0.55;
        bw.clamp_right_to_lower = true;
        const AuxiliaryFront wtilde = build_w(c, term, mesh, zg, bw);
        FrontProfile p = run_band(wtilde, {0.0, 1.0}, rep.fronts.front().u);
        p.provenance = "band(0,1)+wtilde";
        rep.fronts.push_back(std::move(p));
    }
    if (mesh.dim() == 0 && opts.run_bscan) {
        for (FrontProfile& p : bscan_fronts(term, c, zg, opts.bscan_samples))
            rep.fronts.push_back(std::move(p));
    }

    const std::size_t m = rep.fronts.size();
    rep.min_pairwise = 1e300;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = compare_fronts(rep.fronts[i], rep.fronts[j]);
            rep.pairwise.push_back(d);
            rep.max_pairwise = std::max(rep.max_pairwise, d);
            rep.min_pairwise = std::min(rep.min_pairwise, d);
        }
    if (m < 2) rep.min_pairwise = 0.0;

    const bool any_distinct = rep.max_pairwise > opts.distinct_tol;
    const bool all_agree = rep.max_pairwise <= opts.agree_tol;
    if (any_distinct && c > speeds.c_sharp)
        throw CertificationFailureError("distinct fronts above c_sharp");
    if (any_distinct) rep.regime = Regime::Multiple;
    else if (all_agree) rep.regime = (c > speeds.c_sharp) ? Regime::UniqueCertified
                                                          : Regime::UniqueObserved;
    else rep.regime = Regime::Unknown;
    return rep;
}

} // namespace frontlab
