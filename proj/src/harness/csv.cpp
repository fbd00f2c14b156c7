#include "mllmn/harness/csv.hpp"

#include <fmt/format.h>

namespace mllmn::harness {

std::string to_csv(std::span<const ResultRow> rows) {
  std::string out = "experiment,param,metric,mean,std,trials\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{}\n", r.experiment, r.param, r.metric, r.mean, r.std, r.trials);
  return out;
}

}  // namespace mllmn::harness
