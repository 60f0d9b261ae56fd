#pragma once

#include <string>

#include <json.hpp>

#include "mdr/graph.hpp"
#include "mdr/jl.hpp"
#include "mdr/matousek.hpp"
#include "mdr/metric.hpp"
#include "mdr/spectral.hpp"

namespace mdr {

using Json = nlohmann::ordered_json;

// %.12g text and the double it parses back to
std::string fmt_num(double v);
double sig12(double v);
// 12-significant-digit JSON number; non-finite values become "inf"/"nan" strings
Json jnum(double v);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const FiniteMetric& m);
FiniteMetric metric_from_json(const Json& j);

Json to_json(const Norm& n);
Norm norm_from_json(const Json& j);
Json to_json(const PointCloud& c);
PointCloud cloud_from_json(const Json& j);

Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

Json to_json(const ReversibleChain& c);
ReversibleChain chain_from_json(const Json& j);

Json to_json(const TemplateGraph& t);
Json to_json(const JlPlan& p);
Json to_json(const ProbabilityEstimate& p);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mdr
