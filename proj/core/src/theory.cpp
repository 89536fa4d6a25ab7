#include "infoflow/theory.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

struct Derivative {
  Eigen::Vector2d mu;
  Eigen::Matrix2d sigma;
};

Derivative moment_rhs(const LinearModel2D& model, const Eigen::Vector2d& mu,
                      const Eigen::Matrix2d& sigma) {
  return {model.f + model.a * mu,
          model.a * sigma + sigma * model.a.transpose() +
              model.noise_covariance()};
}

void symmetrize(Eigen::Matrix2d& s) {
  const double off = 0.5 * (s(0, 1) + s(1, 0));
  s(0, 1) = off;
  s(1, 0) = off;
}

}  // namespace

void LinearModel2D::validate() const {
  if (!f.allFinite() || !a.allFinite() || !std::isfinite(b1) ||
      !std::isfinite(b2)) {
    throw Error(ErrorCode::InvalidArgument, "model has non-finite entries");
  }
  if (b1 < 0.0 || b2 < 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "noise amplitudes must be nonnegative");
  }
}

std::vector<MomentState> integrate_moments(const LinearModel2D& model,
                                           const MomentState& init,
                                           double t_end, double dt) {
  model.validate();
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  }
  if (!(t_end > init.t)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must exceed the start time");
  }
  const auto steps =
      static_cast<std::size_t>(std::ceil((t_end - init.t) / dt - 1e-9));

  std::vector<MomentState> traj;
  traj.reserve(steps + 1);
  traj.push_back(init);
  symmetrize(traj.back().sigma);

  for (std::size_t k = 0; k < steps; ++k) {
    const MomentState& s = traj.back();
    const double h = (k + 1 == steps) ? t_end - s.t : dt;

    const auto k1 = moment_rhs(model, s.mu, s.sigma);
    const auto k2 = moment_rhs(model, s.mu + 0.5 * h * k1.mu,
                               s.sigma + 0.5 * h * k1.sigma);
    const auto k3 = moment_rhs(model, s.mu + 0.5 * h * k2.mu,
                               s.sigma + 0.5 * h * k2.sigma);
    const auto k4 =
        moment_rhs(model, s.mu + h * k3.mu, s.sigma + h * k3.sigma);

    MomentState next;
    next.mu = s.mu + (h / 6.0) * (k1.mu + 2.0 * k2.mu + 2.0 * k3.mu + k4.mu);
    next.sigma = s.sigma + (h / 6.0) * (k1.sigma + 2.0 * k2.sigma +
                                        2.0 * k3.sigma + k4.sigma);
    next.t = (k + 1 == steps) ? t_end : init.t + static_cast<double>(k + 1) * dt;
    symmetrize(next.sigma);
    if (next.sigma(0, 0) < -1e-12 || next.sigma(1, 1) < -1e-12 ||
        !next.sigma.allFinite()) {
      throw Error(ErrorCode::NonPositiveVariance,
                  "variance left the admissible range at t = " +
                      std::to_string(next.t));
    }
    traj.push_back(next);
  }
  return traj;
}

bool is_hurwitz(const Eigen::Matrix2d& a) {
  return a.trace() < 0.0 && a.determinant() > 0.0;
}

Eigen::Matrix2d stationary_covariance(const LinearModel2D& model) {
  model.validate();
  const auto& a = model.a;
  if (!is_hurwitz(a)) {
    throw Error(ErrorCode::NotHurwitz,
                "drift matrix has trace " + std::to_string(a.trace()) +
                    " and determinant " + std::to_string(a.determinant()));
  }
  // Entries (1,1), (1,2), (2,2) of A S + S A^T + B B^T = 0.
  Eigen::Matrix3d lhs;
  lhs << 2.0 * a(0, 0), 2.0 * a(0, 1), 0.0,
         a(1, 0), a(0, 0) + a(1, 1), a(0, 1),
         0.0, 2.0 * a(1, 0), 2.0 * a(1, 1);
  const Eigen::Vector3d rhs(-model.b1 * model.b1, 0.0, -model.b2 * model.b2);
  const Eigen::Vector3d s = lhs.fullPivLu().solve(rhs);

  Eigen::Matrix2d sigma;
  sigma << s(0), s(1), s(1), s(2);
  return sigma;
}

FlowPair analytic_flows(const LinearModel2D& model,
                        const Eigen::Matrix2d& sigma) {
  if (!(sigma(0, 0) > 0.0) || !(sigma(1, 1) > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance,
                "flows need positive marginal variances");
  }
  return {sigma(0, 1) / sigma(0, 0) * model.a(0, 1),
          sigma(0, 1) / sigma(1, 1) * model.a(1, 0)};
}

}  // namespace infoflow
