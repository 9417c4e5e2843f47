#include "frontlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace frontlab::kernels {

namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double s_nrm2sq(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double s_sup_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double s_sup_abs_diff(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_xpad(const double* x, double a, const double* d, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * d[i];
}

void s_clamp_box(double* x, const double* lo, const double* hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

double s_link_energy(const double* g, std::size_t n, double bm, double bp, double* W) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double w = bm * g[j + 1] - bp * g[j];
        W[j] = w;
        acc += w * w;
    }
    return acc;
}

void s_link_grad(const double* W, std::size_t n, double bm, double bp, double s, double* grad) {
    if (n < 2) return;
    grad[0] += s * (-bp * W[0]);
    for (std::size_t j = 1; j + 1 < n; ++j)
        grad[j] += s * (bm * W[j - 1] - bp * W[j]);
    grad[n - 1] += s * (bm * W[n - 2]);
}

double s_proj_residual_sup(const double* g, const double* sg,
                           const double* lo, const double* hi, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::min(std::max(g[i] - sg[i], lo[i]), hi[i]);
        m = std::max(m, std::fabs(g[i] - t));
    }
    return m;
}

void s_stencil3(const double* in, double* out, std::size_t n,
                double cl, double cc, double cr) {
    for (std::size_t j = 1; j + 1 < n; ++j)
        out[j] = cl * in[j - 1] + cc * in[j] + cr * in[j + 1];
}

const Ops g_scalar = {
    "scalar",
    s_dot, s_nrm2sq, s_sup_abs, s_sup_abs_diff,
    s_axpy, s_xpad, s_clamp_box,
    s_link_energy, s_link_grad,
    s_proj_residual_sup,
    s_stencil3,
};

const Ops* resolve() {
    if (const char* env = std::getenv("FRONTLAB_KERNELS")) {
        if (std::string(env) == "scalar") return &g_scalar;
    }
#if defined(FRONTLAB_HAVE_AVX2_TU)
    extern const Ops* avx2_ops_if_supported();
    if (const Ops* o = avx2_ops_if_supported()) return o;
#endif
    return &g_scalar;
}

} // namespace

const Ops& scalar_ops() { return g_scalar; }

const Ops& ops() {
    static const Ops* resolved = resolve();
    return *resolved;
}

std::string active_kernel_name() { return ops().name; }

} // namespace frontlab::kernels
