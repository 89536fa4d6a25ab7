#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "infoflow/estimator.hpp"

namespace infoflow::cli {

/// Result object with the fixed field set: variant, t21, t12, se21, se12,
/// ci21, ci12, alpha, m, dt, a_hat, f_hat, b_hat, det_c.
nlohmann::ordered_json flow_json(const FlowEstimate& est,
                                 const ModelEstimate& model,
                                 const CovarianceStats& cov);

/// One human-readable sentence per direction: magnitude, sign reading
/// (destabilizing / stabilizing) and significance.
std::vector<std::string> flow_summary(const FlowEstimate& est,
                                      const std::string& name1,
                                      const std::string& name2,
                                      const std::string& time_unit);

}  // namespace infoflow::cli
