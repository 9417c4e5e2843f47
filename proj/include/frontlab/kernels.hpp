#pragma once

#include <cstddef>
#include <string>

namespace frontlab::kernels {

// Array kernels used by the inner loops of the minimizer and the time
// stepper. Scalar reference implementations always exist; on x86_64 an AVX2
// variant of each is selected at runtime. The dispatch table is resolved
// once; set FRONTLAB_KERNELS=scalar in the environment to force the
// reference path.
struct Ops {
    const char* name;

    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*nrm2sq)(const double* x, std::size_t n);
    double (*sup_abs)(const double* x, std::size_t n);
    double (*sup_abs_diff)(const double* x, const double* y, std::size_t n);
    // y += a*x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // out = x + a*d
    void (*xpad)(const double* x, double a, const double* d, double* out, std::size_t n);
    void (*clamp_box)(double* x, const double* lo, const double* hi, std::size_t n);

    // Weighted link differences W[j] = bm*g[j+1] - bp*g[j], j = 0..n-2.
    // Returns sum of W[j]^2.
    double (*link_energy)(const double* g, std::size_t n, double bm, double bp, double* W);
    // grad[j] += s*(bm*W[j-1] - bp*W[j]) with one-sided ends.
    void (*link_grad)(const double* W, std::size_t n, double bm, double bp, double s, double* grad);

    // sup_j |g[j] - clamp(g[j] - sg[j], lo[j], hi[j])|
    double (*proj_residual_sup)(const double* g, const double* sg,
                                const double* lo, const double* hi, std::size_t n);

    // out[j] = cl*in[j-1] + cc*in[j] + cr*in[j+1] for j = 1..n-2; ends untouched.
    void (*stencil3)(const double* in, double* out, std::size_t n,
                     double cl, double cc, double cr);
};

const Ops& scalar_ops();
// Resolved dispatch table (scalar or AVX2).
const Ops& ops();
std::string active_kernel_name();

} // namespace frontlab::kernels
