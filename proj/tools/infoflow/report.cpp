#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace infoflow::cli {
namespace {

const char* variant_name(FlowVariant v) {
  return v == FlowVariant::Stationary ? "stationary" : "nonstationary_star";
}

std::string describe(double t, const Interval& ci, double alpha,
                     const std::string& from, const std::string& to,
                     const std::string& time_unit) {
  char value[64];
  std::snprintf(value, sizeof value, "%.4g", t);
  std::string s = "T(" + from + " -> " + to + ") = " + value + " nats per " +
                  time_unit + "; ";
  if (t > 0.0) {
    s += from + " makes " + to + " more uncertain (destabilizing)";
  } else if (t < 0.0) {
    s += from + " makes " + to + " more certain (stabilizing)";
  } else {
    s += "no flow";
  }
  char level[32];
  std::snprintf(level, sizeof level, "%g%%", 100.0 * (1.0 - alpha));
  s += ci.contains(0.0) ? "; not significant at " : "; significant at ";
  s += level;
  return s;
}

}  // namespace

nlohmann::ordered_json flow_json(const FlowEstimate& est,
                                 const ModelEstimate& model,
                                 const CovarianceStats& cov) {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(est.variant);
  j["t21"] = est.t21;
  j["t12"] = est.t12;
  j["se21"] = est.se21;
  j["se12"] = est.se12;
  j["ci21"] = {est.ci21.lower, est.ci21.upper};
  j["ci12"] = {est.ci12.lower, est.ci12.upper};
  j["alpha"] = est.alpha;
  j["m"] = est.m;
  j["dt"] = est.dt;
  j["a_hat"] = {{model.a11_hat, model.a12_hat}, {model.a21_hat, model.a22_hat}};
  j["f_hat"] = {model.f1_hat, model.f2_hat};
  j["b_hat"] = {model.b1_hat, model.b2_hat};
  j["det_c"] = cov.det();
  return j;
}

std::vector<std::string> flow_summary(const FlowEstimate& est,
                                      const std::string& name1,
                                      const std::string& name2,
                                      const std::string& time_unit) {
  return {describe(est.t21, est.ci21, est.alpha, name2, name1, time_unit),
          describe(est.t12, est.ci12, est.alpha, name1, name2, time_unit)};
}

}  // namespace infoflow::cli
