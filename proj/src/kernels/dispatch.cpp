#include <cstdlib>
#include <stdexcept>
#include <string>

#include "demoswarm/kernels.hpp"

namespace demoswarm::kernels {

#ifdef DEMOSWARM_HAVE_AVX2
namespace detail {
const KernelTable* avx2_table();
}
#endif

const KernelTable* avx2() {
#ifdef DEMOSWARM_HAVE_AVX2
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() {
    const char* env = std::getenv("DEMOSWARM_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return scalar();
    if (mode == "avx2") {
        if (const KernelTable* t = avx2()) return *t;
        throw std::runtime_error("DEMOSWARM_SIMD=avx2 but AVX2 is unavailable");
    }
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
}

void require_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string("kernel size mismatch: ") + what);
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size(), "dot");
    return active().dot(a.data(), b.data(), a.size());
}

void pairwise_sq_dist(std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    require_same(xs.size(), ys.size(), "pairwise xs/ys");
    require_same(out.size(), xs.size() * xs.size(), "pairwise out");
    active().pairwise_sq_dist(xs.data(), ys.data(), xs.size(), out.data());
}

void nearest_sq_dist(std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    require_same(xs.size(), ys.size(), "nearest xs/ys");
    require_same(out.size(), xs.size(), "nearest out");
    active().nearest_sq_dist(xs.data(), ys.data(), xs.size(), out.data());
}

double coverage_sum(std::span<const double> px, std::span<const double> py,
                    std::span<const double> rx, std::span<const double> ry) {
    require_same(px.size(), py.size(), "coverage points");
    require_same(rx.size(), ry.size(), "coverage robots");
    if (rx.empty()) throw std::invalid_argument("coverage_sum needs at least one robot");
    return active().coverage_sum(px.data(), py.data(), px.size(), rx.data(), ry.data(), rx.size());
}

}  // namespace demoswarm::kernels
