#pragma once

#include "frontlab/front_solver.hpp"
#include "frontlab/speed_theory.hpp"

#include <string>
#include <vector>

namespace frontlab {

enum class Regime { Multiple, UniqueCertified, UniqueObserved, Unknown };

std::string regime_name(Regime r);

struct CensusOptions {
    FrontGridSpec grid{};
    bool run_bscan = true;       // dim 0 only
    int bscan_samples = 96;
    double agree_tol = 1e-6;     // same front
    double distinct_tol = 1e-2;  // different fronts
    SpgOptions spg{};
};

struct CensusReport {
    double c = 0.0;
    std::vector<FrontProfile> fronts;
    std::vector<double> pairwise;  // row-major upper triangle distances
    Regime regime = Regime::Unknown;
    bool expect_multiple = false;  // c_star < c < c_dag_v1 from the report
    double max_pairwise = 0.0;
    double min_pairwise = 0.0;
};

// Runs the confined and unconfined minimizations, a second minimization with
// an independently built auxiliary function when c > c_sharp, and (dim 0) a
// scan of shooting tail parameters; deduplicates by aligned sup distance and
// classifies the regime. Finding two distinct fronts above c_sharp is a
// certification failure and throws.
CensusReport front_census(const ReactionTerm& term, const CrossSectionMesh& mesh, double c,
                          const SpeedReport& speeds, const CensusOptions& opts = {});

// Shooting scan helper: plateau-reaching tail parameters at this speed, one
// profile per distinct plateau (dim 0).
std::vector<FrontProfile> bscan_fronts(const ReactionTerm& term, double c, const ZGrid& zg,
                                       int n_samples);

} // namespace frontlab
