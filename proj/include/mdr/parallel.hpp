#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "mdr/common.hpp"

namespace mdr {

// splitmix64 finalizer over (seed, index); replicate streams never depend on thread layout
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

void set_threads(int n);
int max_threads();

inline constexpr std::size_t kBlock = 4096;

template <class F>
void parallel_for(std::size_t n, F&& f, Exec exec = Exec::parallel)
{
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const long long m = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < m; ++i) f(static_cast<std::size_t>(i));
}

// Fixed-size blocks, partials combined in block order: bitwise identical for any thread count.
template <class F>
double blocked_sum(std::size_t n, F&& f, Exec exec = Exec::parallel)
{
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<double> part(nb, 0.0);
    parallel_for(
        nb,
        [&](std::size_t b) {
            double s = 0.0;
            const std::size_t hi = std::min(n, (b + 1) * kBlock);
            for (std::size_t i = b * kBlock; i < hi; ++i) s += f(i);
            part[b] = s;
        },
        exec);
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

template <std::size_t K>
struct McStats {
    std::uint64_t samples = 0;
    std::array<double, K> mean{};
    std::array<double, K> std_error{};
};

// draw(rng, out) fills out[0..K) for one replicate; block b uses mt19937_64(derive_seed(seed, b)).
template <std::size_t K, class F>
McStats<K> monte_carlo(std::uint64_t samples, std::uint64_t seed, F&& draw, Exec exec = Exec::parallel)
{
    const std::size_t nb = (samples + kBlock - 1) / kBlock;
    std::vector<std::array<double, 2 * K>> part(nb);
    parallel_for(
        nb,
        [&](std::size_t b) {
            std::mt19937_64 rng(derive_seed(seed, b));
            std::array<double, 2 * K> acc{};
            std::array<double, K> out{};
            const std::uint64_t hi = std::min<std::uint64_t>(samples, (b + 1) * kBlock);
            for (std::uint64_t i = b * kBlock; i < hi; ++i) {
                draw(rng, out);
                for (std::size_t j = 0; j < K; ++j) {
                    acc[j] += out[j];
                    acc[K + j] += out[j] * out[j];
                }
            }
            part[b] = acc;
        },
        exec);
    std::array<double, 2 * K> tot{};
    for (const auto& p : part)
        for (std::size_t j = 0; j < 2 * K; ++j) tot[j] += p[j];
    McStats<K> r;
    r.samples = samples;
    const double n = static_cast<double>(samples);
    for (std::size_t j = 0; j < K; ++j) {
        r.mean[j] = tot[j] / n;
        double var = samples > 1 ? (tot[K + j] - n * r.mean[j] * r.mean[j]) / (n - 1) : 0.0;
        r.std_error[j] = std::sqrt(std::max(0.0, var) / n);
    }
    return r;
}

}  // namespace mdr
