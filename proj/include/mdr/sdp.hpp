#pragma once

#include <cstdint>

#include "mdr/metric.hpp"

namespace mdr {

struct C2Options {
    double tol = 1e-6;
    long max_iters = 200000;  // per feasibility test
    int stall_window = 500;
};

struct C2Result {
    double alpha = 1.0;  // smallest level found feasible (== hi)
    double lo = 1.0;
    double hi = 1.0;
    Matrix Q;            // centred Gram witness at level hi
    long iterations = 0;
    bool converged = true;  // false if some feasibility test hit max_iters undecided
};

C2Result c2_sdp(const FiniteMetric& m, C2Options opt = {});

// max violation of d^2 <= L_ij(Q) <= alpha^2 d^2 relative to max d^2
double gram_violation(const FiniteMetric& m, const Matrix& Q, double alpha);

struct CertificateCheck {
    bool holds = true;
    double lhs = 0.0;
    double rhs = 0.0;
};

CertificateCheck check_certificate(const FiniteMetric& m, const Matrix& A, double alpha);

struct CertificateSearch {
    Matrix A;        // trace-one PSD matrix with zero row sums
    double lhs = 0.0;
    double rhs = 0.0;
    bool violated = false;
};

// projected supergradient ascent of lhs - rhs over the trace-one slice of the certificate cone
CertificateSearch search_certificate(const FiniteMetric& m, double alpha, int iters = 4000, std::uint64_t seed = 1);

PointCloud extract_points(const Matrix& Q);

// independent check on c2: smoothed distortion minimisation over configurations in R^{n-1},
// quasi-random (Halton, randomly shifted) starts
struct C2Search {
    double alpha = 0.0;
    PointCloud best;
};
C2Search c2_configuration_search(const FiniteMetric& m, int starts = 64, std::uint64_t seed = 7);

}  // namespace mdr
