#pragma once

#include <vector>

#include <Eigen/Core>

#include "isaacsfd/directions.hpp"
#include "isaacsfd/problem.hpp"

namespace isaacsfd {

/// Extremal operator P(u) = max over (matrix, sign pattern) of
/// [tr(a u'') + delta_hat^{-1} sum_i s_i u'_i]: a max of linear
/// functionals, hence convex and positive homogeneous of degree one.
/// matrix_set is built over the direction set: the uniform weights
/// s = d / sum |l_k|^2 decompose the identity over half_set, and each
/// member flips one directional weight from delta_hat*s to
/// delta_hat^{-1}*s (plus the two uniform extremes), so every member
/// stays in S_{delta_hat}.
struct PucciFamily {
  double delta_hat = 0.0;
  std::vector<Eigen::MatrixXd> matrix_set;
  double drift_bound = 0.0;  // delta_hat^{-1}
  std::vector<Eigen::VectorXd> signs;

  int member_count() const {
    return static_cast<int>(matrix_set.size() * signs.size());
  }

  double evaluate(const Eigen::VectorXd& grad,
                  const Eigen::MatrixXd& hess) const;
  double evaluate(const Symbol& sym) const { return evaluate(sym.grad, sym.hess); }
};

PucciFamily make_pucci(double delta_hat, const DirectionSet& lambda);

enum class FuseMode { MaxFuse, MinFuse };

/// The K-truncated equation as a plain sup-inf problem. MaxFuse extends
/// the maximizer's controls so the fused Hamiltonian equals
/// max(H[u], P[u] - K); MinFuse extends the minimizer's so it equals
/// min(H[u], -P[-u] + K).
struct FusedProblem {
  FuseMode mode = FuseMode::MaxFuse;
  double K = 0.0;
  double delta_hat = 0.0;
  int base_alpha_count = 0;
  int base_beta_count = 0;
  IsaacsProblem assembled;

  /// True when the control index belongs to the truncation family.
  bool alpha_is_truncation(int alpha) const {
    return mode == FuseMode::MaxFuse && alpha >= base_alpha_count;
  }
  bool beta_is_truncation(int beta) const {
    return mode == FuseMode::MinFuse && beta >= base_beta_count;
  }
};

FusedProblem fuse(const IsaacsProblem& base, const PucciFamily& pucci,
                  double K, FuseMode mode);

}  // namespace isaacsfd
