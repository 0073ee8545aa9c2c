#pragma once

#include <cstddef>

// Dense-layer arithmetic used by the actor-critic networks. Each kernel has
// a scalar reference and an AVX2+FMA variant picked once at startup; the
// scalar path can be forced for equivalence testing (or via the
// RANLOOP_FORCE_SCALAR environment variable).

namespace ranloop::drl::kern {

// y = W x + b, W row-major [rows x cols]
void matvec(const double* w, const double* x, const double* b, double* y, size_t rows,
            size_t cols);

// xg += W^T g
void matvec_t_acc(const double* w, const double* g, double* xg, size_t rows, size_t cols);

// Wg += g outer x ; bg += g
void outer_acc(double* wg, double* bg, const double* g, const double* x, size_t rows,
               size_t cols);

void tanh_vec(const double* x, double* y, size_t n);

// gx = g * (1 - y^2), y = tanh(x) already computed
void tanh_backward(const double* y, const double* g, double* gx, size_t n);

// axpy: y += a * x
void axpy(double a, const double* x, double* y, size_t n);

double dot(const double* a, const double* b, size_t n);

void set_force_scalar(bool v);
bool simd_active();  // true when the AVX2 path is in use

}  // namespace ranloop::drl::kern
