#pragma once

#include "frontlab/front_solver.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace frontlab {

// Guaranteed lower bound -1/2 (c' - 2 lambda_-(c,nu_hat))(c' - 2 lambda_+(c,nu_hat))
// on the decay rate of the squared weighted norm. Requires
// 2 lambda_-(c,nu_hat) < c' < 2 lambda_+(c,nu_hat).
double predicted_rate(double c, double c_prime, double nu_hat);

struct PerturbationState {
    GridField omega;  // tilted field e^{c'z/2} w at t_end, on the evolution window
    ZGrid zg;
    double t = 0.0;
    std::vector<std::pair<double, double>> history;  // (t, weighted norm^2)
    long clip_count = 0;
    double sigma_measured = 0.0;  // squared-norm decay rate from the last half
};

struct EvolveOptions {
    double dt = 0.0;       // 0: use 0.25 dz^2
    double t_end = 2.0;
    int record_every = 8;
    double nu_hat = 0.0;   // required for the window check
    double blowup_factor = 1e3;
};

// Explicit Euler evolution of a perturbation of the front in the co-moving
// frame, in the tilted variable. w0 gives the untilted initial perturbation
// w(z,y); the state clips so the total solution stays in [0,1] and records
// the weighted norm history.
PerturbationState evolve(const FrontProfile& front, const ReactionTerm& term,
                         const std::function<double(double, std::size_t)>& w0,
                         double c_prime, const EvolveOptions& opts);

// Gaussian bump of the given amplitude centered in the front core, shaped by
// psi0 across the section.
std::function<double(double, std::size_t)> bump_perturbation(const FrontProfile& front,
                                                             double amplitude,
                                                             double center = 0.0,
                                                             double width = 2.0);

} // namespace frontlab
