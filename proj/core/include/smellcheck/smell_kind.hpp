#pragma once

#include <string>
#include <vector>

#include "smellcheck/granularity.hpp"

namespace smellcheck {

// One entry of the smell catalog: the name, the granularity it applies to,
// and the ordered metric set used as regressors of its model.
struct SmellKind {
    std::string name;
    Granularity granularity = Granularity::method;
    std::vector<std::string> metric_set;
    double threshold = 0.5;
};

}  // namespace smellcheck
