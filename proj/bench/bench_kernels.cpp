// Serial reference vs OpenMP kernel timings; also checks the two paths agree bit for bit.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "mdr/graph.hpp"
#include "mdr/jl.hpp"
#include "mdr/matousek.hpp"
#include "mdr/metric.hpp"
#include "mdr/parallel.hpp"
#include "mdr/spectral.hpp"

using namespace mdr;

namespace {

double best_of(int reps, const std::function<void()>& f)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

bool all_same = true;

template <class R>
void row(const char* name, int reps, const std::function<R(Exec)>& kernel)
{
    R a{}, b{};
    const double ts = best_of(reps, [&] { a = kernel(Exec::serial); });
    const double tp = best_of(reps, [&] { b = kernel(Exec::parallel); });
    const bool same = a == b;
    all_same = all_same && same;
    std::printf("%-26s %10.4f %10.4f %7.2fx  %s\n", name, ts, tp, ts / tp, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv)
{
    const int reps = argc > 1 ? std::stoi(argv[1]) : 3;
    std::printf("threads: %d\n%-26s %10s %10s %8s\n", max_threads(), "kernel", "serial s", "omp s", "speedup");

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    PointCloud cloud;
    cloud.coords.resize(1500, 64);
    for (int i = 0; i < cloud.coords.size(); ++i) cloud.coords.data()[i] = g(rng);
    row<Matrix>("pairwise 1500x64", reps, [&](Exec e) { return cloud.pairwise(e); });

    const Matrix d = cloud.pairwise().topLeftCorner(500, 500);
    row<bool>("triangle check 500", reps, [&](Exec e) { return find_triangle_violation(d, 1e-12, e).has_value(); });

    const Graph rg = random_regular_graph(3000, 4, 2);
    row<std::vector<int>>("all-pairs BFS 3000", reps, [&](Exec e) { return all_pairs_hops(rg, e); });
    row<int>("girth 3000", reps, [&](Exec e) { return girth(rg, e); });

    row<double>("psi Monte Carlo 5e4", reps,
                [](Exec e) { return psi_monte_carlo(20, 5, 2.0, sigma_max(20, 5, 2.0), 50000, 3, e).value; });

    MarkovChainSpec path;
    path.P = Matrix::Zero(40, 40);
    path.P(0, 1) = path.P(39, 38) = 1.0;
    for (int i = 1; i < 39; ++i) path.P(i, i - 1) = path.P(i, i + 1) = 0.5;
    path.init = Vector::Constant(40, 1.0 / 40);
    path.horizon = 32;
    path.fdist.resize(40, 40);
    for (int a = 0; a < 40; ++a)
        for (int b = 0; b < 40; ++b) path.fdist(a, b) = std::abs(a - b);
    row<double>("markov convexity MC 1e5", reps, [&](Exec e) {
        return markov_convexity_ratio(path, 100000, 4, McMethod::monte_carlo, e).lhs_q;
    });

    row<std::string>("matousek harness 16x64", reps,
                     [](Exec e) { return harness_csv(experiment_harness(64, 6, 1.0, 12.0, 16, 5, 2.0, e)); });

    std::printf("%s\n", all_same ? "serial and parallel results identical" : "serial and parallel results DIFFER");
    return all_same ? 0 : 1;
}
