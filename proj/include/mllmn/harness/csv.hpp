#pragma once

#include <span>
#include <string>

#include "mllmn/harness/experiments.hpp"

namespace mllmn::harness {

/// Header "experiment,param,metric,mean,std,trials", then one line per row.
/// Numbers use the shortest round-trip form.
std::string to_csv(std::span<const ResultRow> rows);

}  // namespace mllmn::harness
