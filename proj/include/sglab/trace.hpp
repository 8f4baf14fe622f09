#pragma once

#include "sglab/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sglab {

// Time series of an evolved field: values on a fixed evaluation set plus
// the variance / entropy / Fisher information track of the evolved density.
// Entropy and Fisher entries are NaN when the field is not a positive
// density.  value_se is populated only by Monte-Carlo methods.
struct EvolutionTrace {
    std::vector<double> times;
    std::vector<Vec> evaluation_points;
    std::vector<std::vector<double>> values;   // [time][point]
    std::vector<std::vector<double>> value_se; // same shape, may be empty
    std::vector<double> variance;
    std::vector<double> entropy;
    std::vector<double> fisher;
    std::string method;
    std::string field;
    std::string potential;
    nlohmann::json meta; // options the run actually used
};

// CSV: one row per time (t, value@each point, variance, entropy, fisher);
// the JSON sidecar records the evaluation points and metadata.
void write_trace_csv(const EvolutionTrace& tr, const std::string& csv_path,
                     const std::string& meta_path);

} // namespace sglab
