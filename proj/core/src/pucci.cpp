#include "isaacsfd/pucci.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "isaacsfd/errors.hpp"

namespace isaacsfd {

double PucciFamily::evaluate(const Eigen::VectorXd& grad,
                             const Eigen::MatrixXd& hess) const {
  bool first = true;
  double best = 0.0;
  for (const auto& m : matrix_set) {
    double second = m.cwiseProduct(hess).sum();
    for (const auto& s : signs) {
      double v = second + drift_bound * s.dot(grad);
      if (first || v > best) {
        best = v;
        first = false;
      }
    }
  }
  return best;
}

PucciFamily make_pucci(double delta_hat, const DirectionSet& lambda) {
  if (!(delta_hat > 0.0 && delta_hat <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "delta_hat must lie in (0, 1]");
  }
  const int d = lambda.dims();
  const int nh = lambda.half_size();

  double norm_sq_sum = 0.0;
  for (int k = 0; k < nh; ++k) {
    double nk = lambda.half_at(k).norm();
    norm_sq_sum += nk * nk;
  }
  const double s = double(d) / norm_sq_sum;

  // The uniform weights must reassemble the identity; this holds for the
  // coprime max-norm families by symmetry and is checked outright.
  Eigen::MatrixXd eye_check = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < nh; ++k) eye_check += s * lambda.half_at(k).outer();
  if ((eye_check - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() >
      1e-12) {
    throw Error(ErrorCode::ConfigError,
                "direction set is not symmetric enough for the uniform "
                "identity decomposition");
  }

  PucciFamily fam;
  fam.delta_hat = delta_hat;
  fam.drift_bound = 1.0 / delta_hat;

  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  auto push_unique = [&](const Eigen::MatrixXd& m) {
    for (const auto& have : fam.matrix_set) {
      if ((have - m).cwiseAbs().maxCoeff() < 1e-14) return;
    }
    fam.matrix_set.push_back(m);
  };
  push_unique(delta_hat * eye);
  push_unique(fam.drift_bound * eye);
  for (int k = 0; k < nh; ++k) {
    push_unique(delta_hat * eye +
                (fam.drift_bound - delta_hat) * s * lambda.half_at(k).outer());
  }

  for (const auto& m : fam.matrix_set) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.eigenvalues().minCoeff() < delta_hat - 1e-10 ||
        es.eigenvalues().maxCoeff() > fam.drift_bound + 1e-10) {
      throw Error(ErrorCode::EllipticityViolation,
                  "generated extremal matrix escapes S_delta_hat");
    }
  }

  // All 2^d sign patterns, in binary counting order.
  for (int mask = 0; mask < (1 << d); ++mask) {
    Eigen::VectorXd sign(d);
    for (int i = 0; i < d; ++i) sign(i) = (mask >> i) & 1 ? 1.0 : -1.0;
    fam.signs.push_back(sign);
  }
  return fam;
}

FusedProblem fuse(const IsaacsProblem& base, const PucciFamily& pucci,
                  double K, FuseMode mode) {
  if (K < 0.0) throw Error(ErrorCode::ConfigError, "K must be >= 0");
  const int d = base.dims();

  // Every truncation control is one (matrix, sign) member with constant
  // coefficients, c = 0 and forcing -K (MaxFuse) or +K (MinFuse).
  std::vector<CoefficientRecord> members;
  for (const auto& m : pucci.matrix_set) {
    for (const auto& s : pucci.signs) {
      CoefficientRecord rec;
      rec.a = constant_matrix(m);
      rec.b = constant_vector(pucci.drift_bound * s);
      rec.c = constant_scalar(0.0);
      rec.f = constant_scalar(mode == FuseMode::MaxFuse ? -K : K);
      members.push_back(std::move(rec));
    }
  }
  const int n_members = static_cast<int>(members.size());

  IsaacsProblem::Spec spec(base.domain());
  spec.holder_gamma1 = base.holder_gamma1();
  // The member drift has norm drift_bound * sqrt(d) and the truncation
  // forcing has size K; both are admitted by relaxing delta.
  spec.delta = std::min(base.delta(), pucci.delta_hat / std::sqrt(double(d)));
  if (K > 1.0) spec.delta = std::min(spec.delta, 1.0 / (K * (1.0 + 1e-12)));

  if (mode == FuseMode::MaxFuse) {
    spec.n_alpha = base.n_alpha() + n_members;
    spec.n_beta = base.n_beta();
    for (int alpha = 0; alpha < base.n_alpha(); ++alpha) {
      for (int beta = 0; beta < base.n_beta(); ++beta) {
        spec.coefficients.push_back(base.coeff(alpha, beta));
      }
    }
    for (int mi = 0; mi < n_members; ++mi) {
      for (int beta = 0; beta < base.n_beta(); ++beta) {
        spec.coefficients.push_back(members[static_cast<size_t>(mi)]);
      }
    }
  } else {
    spec.n_alpha = base.n_alpha();
    spec.n_beta = base.n_beta() + n_members;
    for (int alpha = 0; alpha < base.n_alpha(); ++alpha) {
      for (int beta = 0; beta < base.n_beta(); ++beta) {
        spec.coefficients.push_back(base.coeff(alpha, beta));
      }
      for (int mi = 0; mi < n_members; ++mi) {
        spec.coefficients.push_back(members[static_cast<size_t>(mi)]);
      }
    }
  }

  FusedProblem out{mode,
                   K,
                   pucci.delta_hat,
                   base.n_alpha(),
                   base.n_beta(),
                   IsaacsProblem(std::move(spec))};
  return out;
}

}  // namespace isaacsfd
