#pragma once

#include <cstdint>
#include <string>

#include "mdr/io.hpp"
#include "mdr/metric.hpp"

namespace mdr {

struct PipelineReport {
    int n = 0;
    int bourgain_dim = 0;
    double bourgain_distortion = 0.0;
    double budget = 0.0;  // alpha_total / bourgain distortion
    std::string reduction;  // "jl" or "span"
    std::int64_t k = 0;
    int jl_attempts = 0;
    int final_dim = 0;
    double distortion = 0.0;  // measured end to end
    PointCloud image;
};

// Bourgain embedding, then JL reduction with the remaining distortion budget; falls back to the
// isometric span coordinates when no certified k beats the rank
PipelineReport pipeline_embed_reduce(const FiniteMetric& m, double alpha_total, std::uint64_t seed);
Json to_json(const PipelineReport& r);

// spec: {"command": name, "seed": u64 (optional), "grid": {param: [values...], ...}}
// commands: jl-dim, psi, sigma-max, bourgain, regular-graph, matousek
std::string run_sweep(const Json& spec, std::uint64_t default_seed);

}  // namespace mdr
