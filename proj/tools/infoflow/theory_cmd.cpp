#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include "commands.hpp"
#include "infoflow/error.hpp"
#include "manifest.hpp"

namespace infoflow::cli {

void add_theory(CLI::App& app, TheoryOptions& opt) {
  auto* sub = app.add_subcommand(
      "theory", "Integrate moment equations and report stationary flows");
  opt.model.add_to(*sub);
  sub->add_option("--mu1", opt.mu1, "Initial mean of X1")->capture_default_str();
  sub->add_option("--mu2", opt.mu2, "Initial mean of X2")->capture_default_str();
  sub->add_option("--s11", opt.s11, "Initial variance of X1")->capture_default_str();
  sub->add_option("--s12", opt.s12, "Initial covariance")->capture_default_str();
  sub->add_option("--s22", opt.s22, "Initial variance of X2")->capture_default_str();
  sub->add_option("--t-end", opt.t_end, "Integration horizon")->capture_default_str();
  sub->add_option("--dt", opt.dt, "RK4 step")->capture_default_str();
  sub->add_option("--every", opt.every, "Write every n-th state")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--out", opt.out,
                  "Trajectory CSV (t,mu1,mu2,s11,s12,s22,t21,t12)");
}

int run_theory(const TheoryOptions& opt) {
  const auto model = opt.model.model();
  const auto sigma = stationary_covariance(model);
  const auto flows = analytic_flows(model, sigma);

  RunManifest manifest;
  manifest.command = "theory";
  auto& p = manifest.parameters;
  opt.model.record(p);
  p["mu0"] = {opt.mu1, opt.mu2};
  p["sigma0"] = {opt.s11, opt.s12, opt.s22};
  p["t_end"] = opt.t_end;
  p["dt"] = opt.dt;
  p["every"] = opt.every;

  if (!opt.out.empty()) {
    MomentState init;
    init.mu << opt.mu1, opt.mu2;
    init.sigma << opt.s11, opt.s12, opt.s12, opt.s22;
    const auto traj = integrate_moments(model, init, opt.t_end, opt.dt);

    std::FILE* f = std::fopen(opt.out.c_str(), "w");
    if (f == nullptr) throw Error(ErrorCode::InvalidArgument, "cannot write " + opt.out);
    std::fprintf(f, "# %s\n", manifest.comment_line().c_str());
    std::fprintf(f, "t,mu1,mu2,s11,s12,s22,t21,t12\n");
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (i % opt.every != 0 && i + 1 != traj.size()) continue;
      const auto& s = traj[i];
      double t21 = std::numeric_limits<double>::quiet_NaN();
      double t12 = t21;
      if (s.sigma(0, 0) > 0.0 && s.sigma(1, 1) > 0.0) {
        const auto fl = analytic_flows(model, s.sigma);
        t21 = fl.t21;
        t12 = fl.t12;
      }
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                   s.mu(0), s.mu(1), s.sigma(0, 0), s.sigma(0, 1),
                   s.sigma(1, 1), t21, t12);
    }
    std::fclose(f);
  }

  nlohmann::ordered_json j;
  j["stationary_sigma"] = {{"s11", sigma(0, 0)},
                           {"s12", sigma(0, 1)},
                           {"s22", sigma(1, 1)}};
  j["t21"] = flows.t21;
  j["t12"] = flows.t12;
  j["manifest"] = manifest.to_json();
  std::cout << j.dump(2) << '\n';
  std::fprintf(stderr, "stationary: s11 = %.6g, s12 = %.6g, s22 = %.6g\n",
               sigma(0, 0), sigma(0, 1), sigma(1, 1));
  std::fprintf(stderr, "T21 = %.4f, T12 = %.4f nats per unit time\n",
               flows.t21, flows.t12);
  return kExitOk;
}

}  // namespace infoflow::cli
