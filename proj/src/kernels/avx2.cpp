// Compiled with -mavx2 only (no -mfma) so lane arithmetic matches the scalar
// reference bit for bit in the distance kernels.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "demoswarm/kernels.hpp"

namespace demoswarm::kernels::detail {
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void pairwise_avx2(const double* xs, const double* ys, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const __m256d xi = _mm256_set1_pd(xs[i]);
        const __m256d yi = _mm256_set1_pd(ys[i]);
        double* row = out + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), xi);
            const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), yi);
            _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        }
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            row[j] = dx * dx + dy * dy;
        }
    }
}

void nearest_avx2(const double* xs, const double* ys, std::size_t n, double* out) {
    const double inf = std::numeric_limits<double>::infinity();
    const __m256d vinf = _mm256_set1_pd(inf);
    for (std::size_t i = 0; i < n; ++i) {
        const __m256d xi = _mm256_set1_pd(xs[i]);
        const __m256d yi = _mm256_set1_pd(ys[i]);
        const __m256d self = _mm256_set1_pd(static_cast<double>(i));
        __m256d best = vinf;
        __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
        const __m256d four = _mm256_set1_pd(4.0);
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), xi);
            const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), yi);
            __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            d2 = _mm256_blendv_pd(d2, vinf, _mm256_cmp_pd(idx, self, _CMP_EQ_OQ));
            best = _mm256_min_pd(best, d2);
            idx = _mm256_add_pd(idx, four);
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, best);
        double b = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
        for (; j < n; ++j) {
            if (j == i) continue;
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            b = std::min(b, dx * dx + dy * dy);
        }
        out[i] = b;
    }
}

double coverage_avx2(const double* px, const double* py, std::size_t m,
                     const double* rx, const double* ry, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const __m256d vinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t p = 0;
    for (; p + 4 <= m; p += 4) {
        const __m256d x = _mm256_loadu_pd(px + p);
        const __m256d y = _mm256_loadu_pd(py + p);
        __m256d best = vinf;
        for (std::size_t r = 0; r < n; ++r) {
            const __m256d dx = _mm256_sub_pd(_mm256_set1_pd(rx[r]), x);
            const __m256d dy = _mm256_sub_pd(_mm256_set1_pd(ry[r]), y);
            best = _mm256_min_pd(best, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        }
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(best));
    }
    double total = hsum(acc);
    for (; p < m; ++p) {
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

constexpr KernelTable kAvx2{"avx2", dot_avx2, pairwise_avx2, nearest_avx2, coverage_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace demoswarm::kernels::detail
