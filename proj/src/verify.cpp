#include "frontlab/verify.hpp"

#include "frontlab/aux_front.hpp"
#include "frontlab/equilibria.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/front_solver.hpp"
#include "frontlab/multiplicity.hpp"
#include "frontlab/speed_theory.hpp"
#include "frontlab/stability_sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

namespace frontlab {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

struct Ctx {
    VerifyOptions opts;
    ReactionTerm ex61 = ReactionTerm::example61();
    ReactionTerm kpp = ReactionTerm::kpp();
    CrossSectionMesh point = CrossSectionMesh::point();

    std::optional<ThresholdSpeeds> th61;
    std::optional<SpeedReport> speeds61;
    std::optional<CensusReport> census225;
    std::optional<CensusReport> census6;
    std::optional<CensusReport> census_kpp;
    std::optional<FrontProfile> stab_front;

    const ThresholdSpeeds& thresholds61() {
        if (!th61) th61 = threshold_speeds(ex61, point);
        return *th61;
    }
    const SpeedReport& report61() {
        if (!speeds61) {
            SpeedReportOptions so;
            so.bracket = {1.4, 3.0};
            so.tol = 0.05;
            so.dag_bracket = {2.4, 3.2};
            so.dag_tol = 0.01;
            speeds61 = speed_report(ex61, point, so);
        }
        return *speeds61;
    }
    const CensusReport& c225() {
        if (!census225) {
            CensusOptions co;
            co.grid.dz = opts.census225_dz;
            census225 = front_census(ex61, point, 2.25, report61(), co);
        }
        return *census225;
    }
    const CensusReport& c6() {
        if (!census6) {
            CensusOptions co;
            co.grid.dz = opts.census6_dz;
            census6 = front_census(ex61, point, 6.0, report61(), co);
        }
        return *census6;
    }
    const CensusReport& ckpp() {
        if (!census_kpp) {
            SpeedReportOptions so;
            so.bracket = {1.4, 3.0};
            so.tol = 0.1;
            SpeedReport rep = speed_report(kpp, point, so);
            CensusOptions co;
            co.grid.dz = opts.kpp_dz;
            census_kpp = front_census(kpp, point, opts.kpp_c, rep, co);
        }
        return *census_kpp;
    }
    const FrontProfile& stability_front() {
        if (!stab_front) {
            FrontGridSpec gs;
            gs.dz = opts.stability_dz;
            const ZGrid zg = make_front_grid(6.0, ex61, point, gs);
            const AuxiliaryFront w = build_w(6.0, ex61, point, zg);
            stab_front = minimize_front(ex61, point, zg, 6.0, w, {0.0, 0.5});
        }
        return *stab_front;
    }
};

CheckResult run_check(int id, const std::string& name, double limit_s, Ctx& ctx,
                      bool (*body)(Ctx&, std::string&)) {
    CheckResult r;
    r.id = id;
    r.name = name;
    r.limit_seconds = limit_s;
    const auto t0 = Clock::now();
    try {
        r.pass = body(ctx, r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.seconds >= limit_s) {
        r.pass = false;
        r.detail += " [over runtime limit]";
    }
    return r;
}

// 1. threshold constants
bool chk_thresholds(Ctx& ctx, std::string& detail) {
    const ThresholdSpeeds& th = ctx.thresholds61();
    const double csharp_ref = std::sqrt(127.0 / 5.0);
    detail = "c0=" + fmt(th.c0) + " c_sharp=" + fmt(th.c_sharp);
    return std::fabs(th.c0 - 2.0) <= 1e-12 && std::fabs(th.c_sharp - csharp_ref) <= 1e-6;
}

// 2. c* and c1* bisection
bool chk_cstar(Ctx& ctx, std::string& detail) {
    const SpeedReport& rep = ctx.report61();
    detail = "c*=" + fmt(rep.c_star.value) + " c1*=" + fmt(rep.c1_star.value);
    return std::fabs(rep.c_star.value - 2.0) <= 0.05 &&
           std::fabs(rep.c1_star.value - 2.0) <= 0.05 &&
           (rep.c_star.hi - rep.c_star.lo) <= 0.05 + 1e-12 &&
           (rep.c1_star.hi - rep.c1_star.lo) <= 0.05 + 1e-12;
}

// 3. c_dag by functional bisection and bistable shooting
bool chk_cdag(Ctx& ctx, std::string& detail) {
    const double ref = 9.0 / std::sqrt(10.0);
    const SpeedReport& rep = ctx.report61();
    if (!rep.c_dag_v1) { detail = "no c_dag bracket"; return false; }
    const BracketedSpeed shoot = bistable_speed_1d(ctx.ex61, 0.5, 1.0, {2.4, 3.2});
    detail = "functional=" + fmt(rep.c_dag_v1->value) + " shooting=" + fmt(shoot.value);
    return std::fabs(rep.c_dag_v1->value - ref) <= 0.01 && std::fabs(shoot.value - ref) <= 0.01;
}

// 4. census at c = 2.25: MULTIPLE with plateaus 1/2 and 1
bool chk_census225(Ctx& ctx, std::string& detail) {
    const CensusReport& rep = ctx.c225();
    bool has_half = false, has_one = false;
    for (const FrontProfile& f : rep.fronts) {
        if (std::fabs(f.plateau_value - 0.5) <= 1e-3) has_half = true;
        if (std::fabs(f.plateau_value - 1.0) <= 1e-3) has_one = true;
    }
    detail = regime_name(rep.regime) + " fronts=" + std::to_string(rep.fronts.size()) +
             " max_pairwise=" + fmt(rep.max_pairwise);
    return rep.regime == Regime::Multiple && has_half && has_one && rep.expect_multiple;
}

// 5. exact tanh solution: discrete residual and shooting reproduction
bool chk_exact_tanh(Ctx& ctx, std::string& detail) {
    const double c = 9.0 / std::sqrt(10.0);
    const double k = std::sqrt(2.5);
    auto exact = [&](double z) { return 0.75 - 0.25 * std::tanh(k * z); };

    auto residual_at = [&](double dz) {
        const ZGrid zg = ZGrid::over(-8.0, 8.0, dz);
        GridField u;
        u.ny = 1;
        u.v.resize(zg.n);
        for (std::size_t j = 0; j < zg.n; ++j) u.v[j] = exact(zg.z(j));
        GridField res;
        traveling_residual(ctx.ex61, ctx.point, zg, c, u, res, 1, zg.n - 2);
        return residual_sup(res, ctx.point, 1, zg.n - 2);
    };
    const double r1 = residual_at(0.02);
    const double r2 = residual_at(0.01);
    const double ratio = r1 / r2;

    const ZGrid zg = ZGrid::over(-8.0, 8.0, 0.005);
    ShootOptions so;
    so.z_stop = -12.0;
    FrontProfile p = shoot_profile(ctx.ex61, c, 0.5, 0.0, 0.5, 3.0, zg, so);
    double sup = 0.0;
    for (std::size_t j = 0; j < zg.n; ++j)
        sup = std::max(sup, std::fabs(p.u.v[j] - exact(zg.z(j))));

    detail = "res(0.02)=" + fmt(r1) + " ratio=" + fmt(ratio) + " shoot_err=" + fmt(sup);
    return r1 <= 5.0 * 0.02 * 0.02 && ratio > 3.2 && ratio < 4.8 && sup <= 1e-5;
}

// 6. decay law of the c = 2.25 fronts
bool chk_decay(Ctx& ctx, std::string& detail) {
    const auto [lm, lp] = lambda_pm(2.25, -1.0);
    (void)lp;
    bool ok = true;
    int used = 0;
    std::ostringstream os;
    for (const FrontProfile& f : ctx.c225().fronts) {
        if (f.provenance.rfind("band", 0) != 0) continue;
        ++used;
        os << " " << fmt(f.lambda_fit);
        ok = ok && std::fabs(f.lambda_fit - lm) <= 0.02 * lm;
    }
    detail = "lambda_minus=" + fmt(lm) + " fits:" + os.str();
    return ok && used >= 2;
}

// 7. uniqueness at c = 6: all routes agree to 1e-6 after alignment
bool chk_unique6(Ctx& ctx, std::string& detail) {
    const CensusReport& rep = ctx.c6();
    bool have_scan = false, have_wtilde = false;
    for (const FrontProfile& f : rep.fronts) {
        if (f.provenance == "shoot-scan") have_scan = true;
        if (f.provenance == "band(0,1)+wtilde") have_wtilde = true;
    }
    detail = regime_name(rep.regime) + " fronts=" + std::to_string(rep.fronts.size()) +
             " max_pairwise=" + fmt(rep.max_pairwise);
    return rep.regime == Regime::UniqueCertified && rep.fronts.size() >= 4 && have_scan &&
           have_wtilde && rep.max_pairwise <= 1e-6;
}

// 8. strong convexity of the renormalized functional above c_sharp
bool chk_convexity(Ctx& ctx, std::string& detail) {
    const double c = 6.0;
    const ThresholdSpeeds& th = ctx.thresholds61();
    const double sigma = 0.25 * c * c + th.nu_hat0;
    FrontGridSpec gs;
    gs.dz = 0.02;
    const ZGrid zg = make_front_grid(c, ctx.ex61, ctx.point, gs);
    // Use the representable sub-window directly.
    ZGrid wg = zg;
    while (c * wg.z0 < -640.0) {
        wg.z0 += wg.dz;
        --wg.n;
    }
    const AuxiliaryFront waux0 = build_w(c, ctx.ex61, ctx.point, zg);
    AuxiliaryFront waux = waux0;
    waux.w.v.assign(waux0.w.v.end() - static_cast<std::ptrdiff_t>(wg.n), waux0.w.v.end());
    TiltedProblem prob(ctx.ex61, ctx.point, wg, c, waux, {0.0, 1.0});

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = prob.size();
    auto random_admissible = [&]() {
        std::vector<double> g(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double lo = std::max(prob.lower()[k], -0.75);
            const double hi = std::min(prob.upper()[k], 0.75);
            g[k] = lo + (hi - lo) * unif(rng);
        }
        return g;
    };

    double worst = -1e300;
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> g1 = random_admissible();
        const std::vector<double> g2 = random_admissible();
        std::vector<double> mid(n), diff(n);
        for (std::size_t k = 0; k < n; ++k) {
            mid[k] = 0.5 * (g1[k] + g2[k]);
            diff[k] = g2[k] - g1[k];
        }
        const double lhs = prob.value(mid);
        const double rhs = 0.5 * prob.value(g1) + 0.5 * prob.value(g2) -
                           (sigma / 8.0) * prob.weighted_norm2(diff);
        worst = std::max(worst, lhs - rhs);
    }
    detail = "sigma=" + fmt(sigma) + " worst_violation=" + fmt(worst);
    return worst <= 1e-8;
}

// 9. analytic gradient vs central differences
bool chk_gradient(Ctx& ctx, std::string& detail) {
    const double c = 2.25;
    FrontGridSpec gs;
    gs.dz = 0.02;
    gs.z_min_override = -20.0;
    gs.z_max_override = 30.0;
    const ZGrid zg = make_front_grid(c, ctx.ex61, ctx.point, gs);
    const AuxiliaryFront waux = build_w(c, ctx.ex61, ctx.point, zg);
    TiltedProblem prob(ctx.ex61, ctx.point, zg, c, waux, {0.0, 1.0});

    std::vector<double> g0 = prob.seed([&](double z, std::size_t) {
        return 0.9 * 0.5 * (1.0 + std::tanh(-z));
    });
    // keep the base point strictly inside the box
    const std::size_t n = prob.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = prob.lower()[k], hi = prob.upper()[k];
        const double margin = 0.05 * std::min(1.0, hi - lo);
        g0[k] = std::clamp(g0[k], lo + margin, hi - margin);
    }
    std::vector<double> grad;
    prob.value_and_gradient(g0, grad);

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double room = std::min({1.0, prob.upper()[k] - g0[k], g0[k] - prob.lower()[k]});
            d[k] = unif(rng) * room;
        }
        double dirder = 0.0;
        for (std::size_t k = 0; k < n; ++k) dirder += grad[k] * d[k];
        const double eps = 2e-6;
        std::vector<double> gp(n), gm(n);
        for (std::size_t k = 0; k < n; ++k) {
            gp[k] = g0[k] + eps * d[k];
            gm[k] = g0[k] - eps * d[k];
        }
        const double fd = (prob.value(gp) - prob.value(gm)) / (2.0 * eps);
        worst = std::max(worst, std::fabs(fd - dirder) / std::max(1e-12, std::fabs(dirder)));
    }
    detail = "worst_rel_err=" + fmt(worst);
    return worst <= 1e-5;
}

// 10. stability: measured decay of the squared weighted norm
bool chk_stability(Ctx& ctx, std::string& detail) {
    const FrontProfile& front = ctx.stability_front();
    const ThresholdSpeeds& th = ctx.thresholds61();
    const double pred = predicted_rate(6.0, 6.0, th.nu_hat0);

    EvolveOptions eo;
    eo.nu_hat = th.nu_hat0;
    eo.t_end = 2.0;
    PerturbationState st = evolve(front, ctx.ex61, bump_perturbation(front, 1e-3), 6.0, eo);

    EvolveOptions ez = eo;
    ez.t_end = 0.05;
    PerturbationState zs = evolve(front, ctx.ex61,
                                  [](double, std::size_t) { return 0.0; }, 6.0, ez);
    double zmax = 0.0;
    for (const auto& [t, n2] : zs.history) zmax = std::max(zmax, n2);

    detail = "measured=" + fmt(st.sigma_measured) + " predicted=" + fmt(pred) +
             " clips=" + std::to_string(st.clip_count) + " zero_norm=" + fmt(zmax);
    return st.sigma_measured >= 0.8 * pred && zmax == 0.0;
}

// 11. KPP regime
bool chk_kpp(Ctx& ctx, std::string& detail) {
    const ThresholdSpeeds th = threshold_speeds(ctx.kpp, ctx.point);
    const CensusReport& rep = ctx.ckpp();
    detail = "c0=" + fmt(th.c0) + " c_sharp=" + fmt(th.c_sharp) + " regime=" +
             regime_name(rep.regime) + " max_pairwise=" + fmt(rep.max_pairwise);
    return std::fabs(th.c0 - 2.0) <= 1e-12 && std::fabs(th.c_sharp - 2.0) <= 1e-12 &&
           rep.regime == Regime::UniqueCertified;
}

// 12. monotonicity and barriers on every computed front
bool chk_monotone(Ctx& ctx, std::string& detail) {
    std::vector<const CensusReport*> reps{&ctx.c225(), &ctx.c6(), &ctx.ckpp()};
    int checked = 0;
    double worst_slope = -1e300;
    bool ok = true;
    auto check_front = [&](const FrontProfile& f) {
        ++checked;
        const std::size_t ny = f.mesh.n();
        for (std::size_t j = 0; j + 1 < f.zg.n; ++j)
            for (std::size_t i = 0; i < ny; ++i) {
                const double slope = (f.u.at(j + 1, i) - f.u.at(j, i)) / f.zg.dz;
                worst_slope = std::max(worst_slope, slope);
                if (slope > 1e-8) ok = false;
            }
        // barriers: 0 <= u <= 1 with strict interior inequalities up to the
        // double-rounding of a plateau at 1
        bool past_plateau = false;
        for (std::size_t j = 0; j + 1 < f.zg.n; ++j)
            for (std::size_t i = 0; i < ny; ++i) {
                if (f.mesh.dirichlet_node(i)) continue;
                const double u = f.u.at(j, i);
                if (u < 0.0 || u > 1.0) ok = false;
                if (u <= 0.0 && j + 1 < f.zg.n) ok = false;  // strict positivity
                if (u < 1.0 - 1e-12) past_plateau = true;
                else if (past_plateau) ok = false;  // 1.0 re-entered after leaving
                if (u >= 1.0 && f.plateau_value < 1.0 - 1e-6) ok = false;
            }
        if (f.plateau && f.plateau->energy >= 0.0) ok = false;
        if (std::fabs(f.plateau_value - 0.5) < 1e-3 && f.plateau) {
            if (std::fabs(f.plateau->energy - (-1.0 / 24.0)) > 1e-9) ok = false;
        }
        if (f.residual_inf > 1e-5 && f.provenance.rfind("band", 0) == 0) ok = false;
    };
    for (const CensusReport* r : reps)
        for (const FrontProfile& f : r->fronts) check_front(f);
    check_front(ctx.stability_front());
    detail = "fronts=" + std::to_string(checked) + " worst_dz_u=" + fmt(worst_slope);
    return ok && checked >= 8;
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
    Ctx ctx;
    ctx.opts = opts;
    std::vector<CheckResult> out;
    out.push_back(run_check(1, "threshold constants c0, c_sharp", 1.0, ctx, chk_thresholds));
    out.push_back(run_check(2, "c* and c1* bisection", 120.0, ctx, chk_cstar));
    out.push_back(run_check(3, "c_dag(v1) functional + shooting", 120.0, ctx, chk_cdag));
    out.push_back(run_check(4, "census c=2.25: MULTIPLE {0.5, 1.0}", 300.0, ctx, chk_census225));
    out.push_back(run_check(5, "exact tanh: residual + shooting", 10.0, ctx, chk_exact_tanh));
    out.push_back(run_check(6, "tail decay law at c=2.25", 60.0, ctx, chk_decay));
    out.push_back(run_check(7, "uniqueness at c=6 (all routes)", 300.0, ctx, chk_unique6));
    out.push_back(run_check(8, "strong convexity above c_sharp", 60.0, ctx, chk_convexity));
    out.push_back(run_check(9, "gradient vs finite differences", 10.0, ctx, chk_gradient));
    out.push_back(run_check(10, "stability decay rate at c=6", 120.0, ctx, chk_stability));
    out.push_back(run_check(11, "KPP regime: c0=c_sharp=2, unique", 120.0, ctx, chk_kpp));
    out.push_back(run_check(12, "monotonicity and barriers", 60.0, ctx, chk_monotone));
    return out;
}

std::string verification_table(const std::vector<CheckResult>& results) {
    std::string out;
    for (const CheckResult& r : results) {
        char line[256];
        std::snprintf(line, sizeof line, "[%s] %2d %-40s %8.2fs  %s\n",
                      r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                      r.detail.c_str());
        out += line;
    }
    return out;
}

bool verification_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace frontlab
