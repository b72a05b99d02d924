#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2 variant chosen at runtime. The distance kernels are
// bit-identical across variants (sub/mul/add/sqrt/min only, no FMA); the
// reductions (dot, coverage_sum) differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace demoswarm::kernels {

struct KernelTable {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// out[i*n + j] = (xj - xi)^2 + (yj - yi)^2
    void (*pairwise_sq_dist)(const double* xs, const double* ys, std::size_t n, double* out);
    /// out[i] = min over j != i of squared distance; +inf when n == 1
    void (*nearest_sq_dist)(const double* xs, const double* ys, std::size_t n, double* out);
    /// Sum over points p of min over robots r of |p - r|. Requires n_robots >= 1.
    double (*coverage_sum)(const double* px, const double* py, std::size_t n_points,
                           const double* rx, const double* ry, std::size_t n_robots);
};

const KernelTable& scalar();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();

/// The table used by the library. Picked once: DEMOSWARM_SIMD=scalar|avx2|auto
/// (default auto = best supported).
const KernelTable& active();

double dot(std::span<const double> a, std::span<const double> b);
void pairwise_sq_dist(std::span<const double> xs, std::span<const double> ys, std::span<double> out);
void nearest_sq_dist(std::span<const double> xs, std::span<const double> ys, std::span<double> out);
double coverage_sum(std::span<const double> px, std::span<const double> py,
                    std::span<const double> rx, std::span<const double> ry);

}  // namespace demoswarm::kernels
