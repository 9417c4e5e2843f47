#pragma once

#include "frontlab/nonlinearity.hpp"

#include <vector>

namespace frontlab {

// Real roots of p in [lo, hi], ascending, deduplicated. Sign-change roots are
// isolated by sampling and bisection, then polished by Newton; even-order
// roots are recovered from critical points where |p| vanishes.
std::vector<double> poly_real_roots(const Polynomial& p, double lo, double hi,
                                    double tol = 1e-13);

} // namespace frontlab
