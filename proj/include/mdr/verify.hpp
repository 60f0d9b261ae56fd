#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdr/io.hpp"
#include "mdr/jl.hpp"

namespace mdr {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;

struct PropertyResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string detail;  // first failure, or a short summary

    bool ok() const { return trials > 0 && failures == 0; }
};

struct SuiteResult {
    std::string suite;
    std::vector<PropertyResult> properties;
    double seconds = 0.0;

    bool passed() const;
};

struct VerifyOptions {
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t mc_samples = 200000;
    int instances = 200;
    PsiPrefactor prefactor = PsiPrefactor::normalized;  // printed: deliberate fault
};

const std::vector<std::string>& suite_names();
// throws InvalidInput for an unknown suite
SuiteResult run_suite(const std::string& name, const VerifyOptions& opt = {});
Json to_json(const SuiteResult& r);

namespace props {

// jl
PropertyResult reference_dimensions();
PropertyResult projection_vs_gaussian();
PropertyResult psi_closed_form();
PropertyResult psi_monte_carlo(std::uint64_t samples, std::uint64_t seed, PsiPrefactor pref = PsiPrefactor::normalized);
PropertyResult psi_shape();
PropertyResult gaussian_dominated();
PropertyResult gaussian_quadrature();
PropertyResult sigma_max_stationary();
PropertyResult haar_orthogonal(std::uint64_t seed);
PropertyResult haar_beta_ks(std::uint64_t samples, std::uint64_t seed);
struct EmpiricalJl {
    PropertyResult result;
    int successes = 0;
    int trials = 0;
    double certificate = 0.0;
    std::int64_t k = 0;
};
EmpiricalJl empirical_jl(int trials, std::uint64_t seed);

// sdp
PropertyResult sdp_simplex();
PropertyResult sdp_known_values();
PropertyResult sdp_configuration_oracle(int instances, std::uint64_t seed);
PropertyResult sdp_three_points(int instances, std::uint64_t seed);
PropertyResult sdp_extracted_points();
PropertyResult sdp_certificates();

// spectral
PropertyResult lemma_clauses(int instances, std::uint64_t seed);
PropertyResult hilbert_identity(int instances, std::uint64_t seed);
PropertyResult t_ceiling(int instances, std::uint64_t seed);
PropertyResult power_expander(int instances, std::uint64_t seed);
PropertyResult md_chain(int instances, std::uint64_t seed);
PropertyResult gamma_identities(int instances, std::uint64_t seed);
PropertyResult cheeger(int instances, std::uint64_t seed);
PropertyResult regular_expanders(std::uint64_t seed);
PropertyResult dim_exponent(std::uint64_t seed);
PropertyResult markov_convexity(std::uint64_t samples, std::uint64_t seed);

// matousek
PropertyResult matousek_instances(int instances, int n, std::uint64_t seed);
PropertyResult beta_modulus_values();
PropertyResult harness_determinism(std::uint64_t seed);

// metric
PropertyResult frechet_isometry(int instances, std::uint64_t seed);
PropertyResult distortion_scaling(int instances, std::uint64_t seed);
PropertyResult snowflake_metrics(int instances, std::uint64_t seed);
PropertyResult doubling_values(int instances, std::uint64_t seed);
PropertyResult bourgain_envelope(int instances, std::uint64_t seed);
PropertyResult cotype_values();

}  // namespace props

}  // namespace mdr
