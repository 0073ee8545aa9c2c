// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers reach it only after the runtime cpuid check.

#if defined(RANLOOP_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace ranloop::drl::kern::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot(const double* a, const double* b, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void matvec(const double* w, const double* x, const double* b, double* y, size_t rows,
            size_t cols) {
    for (size_t i = 0; i < rows; ++i) {
        double acc = dot(w + i * cols, x, cols);
        y[i] = b ? acc + b[i] : acc;
    }
}

void matvec_t_acc(const double* w, const double* g, double* xg, size_t rows, size_t cols) {
    for (size_t i = 0; i < rows; ++i) {
        const double* row = w + i * cols;
        __m256d gi = _mm256_set1_pd(g[i]);
        size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            __m256d acc = _mm256_loadu_pd(xg + j);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), gi, acc);
            _mm256_storeu_pd(xg + j, acc);
        }
        for (; j < cols; ++j) xg[j] += row[j] * g[i];
    }
}

void outer_acc(double* wg, double* bg, const double* g, const double* x, size_t rows,
               size_t cols) {
    for (size_t i = 0; i < rows; ++i) {
        double* row = wg + i * cols;
        __m256d gi = _mm256_set1_pd(g[i]);
        size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            __m256d acc = _mm256_loadu_pd(row + j);
            acc = _mm256_fmadd_pd(gi, _mm256_loadu_pd(x + j), acc);
            _mm256_storeu_pd(row + j, acc);
        }
        for (; j < cols; ++j) row[j] += g[i] * x[j];
        if (bg) bg[i] += g[i];
    }
}

void tanh_vec(const double* x, double* y, size_t n) {
    // std::tanh stays scalar so both paths round identically; the win is in
    // the matrix kernels.
    for (size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
}

void tanh_backward(const double* y, const double* g, double* gx, size_t n) {
    __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vg = _mm256_loadu_pd(g + i);
        __m256d d = _mm256_fnmadd_pd(vy, vy, one);  // 1 - y*y
        _mm256_storeu_pd(gx + i, _mm256_mul_pd(vg, d));
    }
    for (; i < n; ++i) gx[i] = g[i] * (1.0 - y[i] * y[i]);
}

void axpy(double a, const double* x, double* y, size_t n) {
    __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(y + i);
        acc = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), acc);
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace ranloop::drl::kern::avx2

#endif  // RANLOOP_HAVE_AVX2
