#include <algorithm>
#include <cmath>
#include <limits>

#include "demoswarm/kernels.hpp"

namespace demoswarm::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void pairwise_scalar(const double* xs, const double* ys, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            out[i * n + j] = dx * dx + dy * dy;
        }
    }
}

void nearest_scalar(const double* xs, const double* ys, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            best = std::min(best, dx * dx + dy * dy);
        }
        out[i] = best;
    }
}

double coverage_scalar(const double* px, const double* py, std::size_t m,
                       const double* rx, const double* ry, std::size_t n) {
    double total = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < n; ++r) {
            const double dx = rx[r] - px[p];
            const double dy = ry[r] - py[p];
            best = std::min(best, dx * dx + dy * dy);
        }
        total += std::sqrt(best);
    }
    return total;
}

constexpr KernelTable kScalar{"scalar", dot_scalar, pairwise_scalar, nearest_scalar, coverage_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace demoswarm::kernels
