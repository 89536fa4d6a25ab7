#pragma once

#include <vector>

#include <Eigen/Core>

#include "infoflow/estimator.hpp"

namespace infoflow {

/// dX = (f + A X) dt + diag(b1, b2) dW.
struct LinearModel2D {
  Eigen::Vector2d f = Eigen::Vector2d::Zero();
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  double b1 = 0.0;
  double b2 = 0.0;

  /// Throws InvalidArgument on non-finite entries or negative noise.
  void validate() const;

  Eigen::Matrix2d noise_covariance() const {
    return Eigen::Vector2d(b1 * b1, b2 * b2).asDiagonal();
  }
};

/// Mean and covariance of the Gaussian state density at time t.
struct MomentState {
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
  double t = 0.0;
};

/// Fixed-step RK4 integration of
///   dmu/dt    = f + A mu
///   dSigma/dt = A Sigma + Sigma A^T + B B^T
/// from init.t to t_end. Returns every step including the initial state;
/// the last step is shortened to land on t_end.
std::vector<MomentState> integrate_moments(const LinearModel2D& model,
                                           const MomentState& init,
                                           double t_end, double dt = 1e-3);

/// 2-D Hurwitz test: trace(A) < 0 and det(A) > 0.
bool is_hurwitz(const Eigen::Matrix2d& a);

/// Solves A S + S A^T + B B^T = 0 as a 3x3 linear system in
/// (s11, s12, s22). Throws NotHurwitz for unstable drift.
Eigen::Matrix2d stationary_covariance(const LinearModel2D& model);

/// Flows of the linear system at covariance sigma:
/// T21 = s12 / s11 * a12, T12 = s12 / s22 * a21.
FlowPair analytic_flows(const LinearModel2D& model,
                        const Eigen::Matrix2d& sigma);

}  // namespace infoflow
