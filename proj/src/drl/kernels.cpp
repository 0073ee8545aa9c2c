#include "ranloop/drl/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace ranloop::drl::kern {

namespace {

std::atomic<bool> g_force_scalar{false};

bool avx2_available() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool use_simd() {
    static const bool hw = [] {
        if (std::getenv("RANLOOP_FORCE_SCALAR")) return false;
        return avx2_available();
    }();
    return hw && !g_force_scalar.load(std::memory_order_relaxed);
}

}  // namespace

void set_force_scalar(bool v) { g_force_scalar.store(v, std::memory_order_relaxed); }

bool simd_active() { return use_simd(); }

// ---- scalar reference kernels ----

namespace scalar {

void matvec(const double* w, const double* x, const double* b, double* y, size_t rows,
            size_t cols) {
    for (size_t i = 0; i < rows; ++i) {
        double acc = b ? b[i] : 0.0;
        const double* row = w + i * cols;
        for (size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void matvec_t_acc(const double* w, const double* g, double* xg, size_t rows, size_t cols) {
    for (size_t i = 0; i < rows; ++i) {
        const double* row = w + i * cols;
        double gi = g[i];
        for (size_t j = 0; j < cols; ++j) xg[j] += row[j] * gi;
    }
}

void outer_acc(double* wg, double* bg, const double* g, const double* x, size_t rows,
               size_t cols) {
    for (size_t i = 0; i < rows; ++i) {
        double gi = g[i];
        double* row = wg + i * cols;
        for (size_t j = 0; j < cols; ++j) row[j] += gi * x[j];
        if (bg) bg[i] += gi;
    }
}

void tanh_vec(const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
}

void tanh_backward(const double* y, const double* g, double* gx, size_t n) {
    for (size_t i = 0; i < n; ++i) gx[i] = g[i] * (1.0 - y[i] * y[i]);
}

void axpy(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace scalar

// AVX2 variants live in kernels_avx2.cpp (compiled with -mavx2 -mfma).
#if defined(RANLOOP_HAVE_AVX2)
namespace avx2 {
void matvec(const double* w, const double* x, const double* b, double* y, size_t rows,
            size_t cols);
void matvec_t_acc(const double* w, const double* g, double* xg, size_t rows, size_t cols);
void outer_acc(double* wg, double* bg, const double* g, const double* x, size_t rows,
               size_t cols);
void tanh_vec(const double* x, double* y, size_t n);
void tanh_backward(const double* y, const double* g, double* gx, size_t n);
void axpy(double a, const double* x, double* y, size_t n);
double dot(const double* a, const double* b, size_t n);
}  // namespace avx2
#endif

#if defined(RANLOOP_HAVE_AVX2)
#define RANLOOP_DISPATCH(fn, ...) \
    do {                          \
        if (use_simd())           \
            avx2::fn(__VA_ARGS__);\
        else                      \
            scalar::fn(__VA_ARGS__);\
    } while (0)
#else
#define RANLOOP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void matvec(const double* w, const double* x, const double* b, double* y, size_t rows,
            size_t cols) {
    RANLOOP_DISPATCH(matvec, w, x, b, y, rows, cols);
}

void matvec_t_acc(const double* w, const double* g, double* xg, size_t rows, size_t cols) {
    RANLOOP_DISPATCH(matvec_t_acc, w, g, xg, rows, cols);
}

void outer_acc(double* wg, double* bg, const double* g, const double* x, size_t rows,
               size_t cols) {
    RANLOOP_DISPATCH(outer_acc, wg, bg, g, x, rows, cols);
}

void tanh_vec(const double* x, double* y, size_t n) { RANLOOP_DISPATCH(tanh_vec, x, y, n); }

void tanh_backward(const double* y, const double* g, double* gx, size_t n) {
    RANLOOP_DISPATCH(tanh_backward, y, g, gx, n);
}

void axpy(double a, const double* x, double* y, size_t n) {
    RANLOOP_DISPATCH(axpy, a, x, y, n);
}

double dot(const double* a, const double* b, size_t n) {
#if defined(RANLOOP_HAVE_AVX2)
    if (use_simd()) return avx2::dot(a, b, n);
#endif
    return scalar::dot(a, b, n);
}

}  // namespace ranloop::drl::kern
