// AVX2 variants of the array kernels. This TU is compiled with -mavx2 -mfma;
// nothing here runs unless the CPU reports AVX2 support at startup.

#include "frontlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <immintrin.h>

namespace frontlab::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sw = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d sw = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, sw));
}

inline __m256d vabs(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double v_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

double v_nrm2sq(const double* x, std::size_t n) { return v_dot(x, x, n); }

double v_sup_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, vabs(_mm256_loadu_pd(x + i)));
    double m = hmax(acc);
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double v_sup_abs_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_max_pd(acc, vabs(d));
    }
    double m = hmax(acc);
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

void v_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void v_xpad(const double* x, double a, const double* d, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(d + i), _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = x[i] + a * d[i];
}

void v_clamp_box(double* x, const double* lo, const double* hi, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        v = _mm256_max_pd(v, _mm256_loadu_pd(lo + i));
        v = _mm256_min_pd(v, _mm256_loadu_pd(hi + i));
        _mm256_storeu_pd(x + i, v);
    }
    for (; i < n; ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

double v_link_energy(const double* g, std::size_t n, double bm, double bp, double* W) {
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;
    const __m256d vbm = _mm256_set1_pd(bm);
    const __m256d vbp = _mm256_set1_pd(bp);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        __m256d gnext = _mm256_loadu_pd(g + j + 1);
        __m256d gcur = _mm256_loadu_pd(g + j);
        __m256d w = _mm256_fmsub_pd(vbm, gnext, _mm256_mul_pd(vbp, gcur));
        _mm256_storeu_pd(W + j, w);
        acc = _mm256_fmadd_pd(w, w, acc);
    }
    double r = hsum(acc);
    for (; j < m; ++j) {
        const double w = bm * g[j + 1] - bp * g[j];
        W[j] = w;
        r += w * w;
    }
    return r;
}

void v_link_grad(const double* W, std::size_t n, double bm, double bp, double s, double* grad) {
    if (n < 2) return;
    grad[0] += s * (-bp * W[0]);
    const __m256d vbm = _mm256_set1_pd(s * bm);
    const __m256d vbp = _mm256_set1_pd(s * bp);
    std::size_t j = 1;
    for (; j + 4 <= n - 1; j += 4) {
        __m256d wl = _mm256_loadu_pd(W + j - 1);
        __m256d wr = _mm256_loadu_pd(W + j);
        __m256d r = _mm256_fmsub_pd(vbm, wl, _mm256_mul_pd(vbp, wr));
        _mm256_storeu_pd(grad + j, _mm256_add_pd(_mm256_loadu_pd(grad + j), r));
    }
    for (; j + 1 < n; ++j) grad[j] += s * (bm * W[j - 1] - bp * W[j]);
    grad[n - 1] += s * (bm * W[n - 2]);
}

double v_proj_residual_sup(const double* g, const double* sg,
                           const double* lo, const double* hi, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d gv = _mm256_loadu_pd(g + i);
        __m256d t = _mm256_sub_pd(gv, _mm256_loadu_pd(sg + i));
        t = _mm256_max_pd(t, _mm256_loadu_pd(lo + i));
        t = _mm256_min_pd(t, _mm256_loadu_pd(hi + i));
        acc = _mm256_max_pd(acc, vabs(_mm256_sub_pd(gv, t)));
    }
    double m = hmax(acc);
    for (; i < n; ++i) {
        const double t = std::min(std::max(g[i] - sg[i], lo[i]), hi[i]);
        m = std::max(m, std::fabs(g[i] - t));
    }
    return m;
}

void v_stencil3(const double* in, double* out, std::size_t n,
                double cl, double cc, double cr) {
    if (n < 3) return;
    const __m256d vcl = _mm256_set1_pd(cl);
    const __m256d vcc = _mm256_set1_pd(cc);
    const __m256d vcr = _mm256_set1_pd(cr);
    std::size_t j = 1;
    for (; j + 4 <= n - 1; j += 4) {
        __m256d r = _mm256_mul_pd(vcl, _mm256_loadu_pd(in + j - 1));
        r = _mm256_fmadd_pd(vcc, _mm256_loadu_pd(in + j), r);
        r = _mm256_fmadd_pd(vcr, _mm256_loadu_pd(in + j + 1), r);
        _mm256_storeu_pd(out + j, r);
    }
    for (; j + 1 < n; ++j) out[j] = cl * in[j - 1] + cc * in[j] + cr * in[j + 1];
}

const Ops g_avx2 = {
    "avx2",
    v_dot, v_nrm2sq, v_sup_abs, v_sup_abs_diff,
    v_axpy, v_xpad, v_clamp_box,
    v_link_energy, v_link_grad,
    v_proj_residual_sup,
    v_stencil3,
};

} // namespace

const Ops* avx2_ops_if_supported() {
    return __builtin_cpu_supports("avx2") ? &g_avx2 : nullptr;
}

} // namespace frontlab::kernels
