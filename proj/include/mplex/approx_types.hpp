#pragma once

#include <string>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex {

struct DenseResult {
    NodeSet nodes;
    double rho_value = 0.0;
    std::vector<LayerId> chosen_layers;
    std::string provenance;
};

}  // namespace mplex
