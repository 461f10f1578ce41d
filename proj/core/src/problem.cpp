#include "isaacsfd/problem.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Eigenvalues>

#include "isaacsfd/errors.hpp"

namespace isaacsfd {

Eigen::MatrixXd CoefficientRecord::diffusion(const Eigen::VectorXd& x) const {
  if (sigma) {
    Eigen::MatrixXd s = sigma(x);
    return 0.5 * s * s.transpose();
  }
  if (a) return a(x);
  throw Error(ErrorCode::ConfigError,
              "coefficient record has neither a nor sigma");
}

Eigen::VectorXd CoefficientRecord::drift(const Eigen::VectorXd& x) const {
  if (b) return b(x);
  return Eigen::VectorXd::Zero(x.size());
}

double CoefficientRecord::zero_order(const Eigen::VectorXd& x) const {
  return c ? c(x) : 0.0;
}

double CoefficientRecord::forcing(const Eigen::VectorXd& x) const {
  return f ? f(x) : 0.0;
}

std::vector<Eigen::VectorXd> IsaacsProblem::sample_points(const Domain& domain,
                                                          int count) {
  std::mt19937_64 rng(0x15aac5u);
  auto [lo, hi] = domain.bounding_box();
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<size_t>(count));
  Eigen::VectorXd x(domain.dims());
  for (long attempt = 0; attempt < 1000L * count; ++attempt) {
    for (int i = 0; i < domain.dims(); ++i) {
      std::uniform_real_distribution<double> dist(lo(i), hi(i));
      x(i) = dist(rng);
    }
    if (domain.contains(x)) {
      pts.push_back(x);
      if (static_cast<int>(pts.size()) == count) return pts;
    }
  }
  throw Error(ErrorCode::ConfigError,
              "could not sample domain interior points; domain too thin?");
}

IsaacsProblem::IsaacsProblem(Spec spec) : spec_(std::move(spec)) {
  if (spec_.n_alpha < 1 || spec_.n_beta < 1) {
    throw Error(ErrorCode::ConfigError, "control sets must be nonempty");
  }
  if (!(spec_.delta > 0.0 && spec_.delta <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "delta must lie in (0, 1]");
  }
  if (spec_.coefficients.size() !=
      static_cast<size_t>(spec_.n_alpha) * static_cast<size_t>(spec_.n_beta)) {
    throw Error(ErrorCode::ConfigError,
                "need one coefficient record per control pair");
  }
  if (spec_.validate) validate();
}

void IsaacsProblem::validate() const {
  const double delta = spec_.delta;
  const double bound = 1.0 / delta;
  const double tol = 1e-8;
  auto pts = sample_points(spec_.domain, spec_.validation_samples);

  char msg[200];
  for (int alpha = 0; alpha < spec_.n_alpha; ++alpha) {
    for (int beta = 0; beta < spec_.n_beta; ++beta) {
      const CoefficientRecord& rec = coeff(alpha, beta);
      for (const auto& x : pts) {
        Eigen::MatrixXd A = rec.diffusion(x);
        if (!A.allFinite()) {
          throw Error(ErrorCode::NonFiniteValue, "diffusion not finite");
        }
        if ((A - A.transpose()).cwiseAbs().maxCoeff() >
            1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
          throw Error(ErrorCode::SingularInput, "diffusion not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        double lo = es.eigenvalues().minCoeff();
        double hi = es.eigenvalues().maxCoeff();
        if (lo < delta - tol || hi > bound + tol) {
          std::snprintf(msg, sizeof(msg),
                        "eigenvalues [%.6g, %.6g] escape [delta, 1/delta] = "
                        "[%.6g, %.6g] at pair (%d, %d)",
                        lo, hi, delta, bound, alpha, beta);
          throw Error(ErrorCode::EllipticityViolation, msg);
        }
        double cv = rec.zero_order(x);
        if (!std::isfinite(cv)) {
          throw Error(ErrorCode::NonFiniteValue, "c not finite");
        }
        if (cv < 0.0) {
          std::snprintf(msg, sizeof(msg), "c = %.6g < 0 at pair (%d, %d)", cv,
                        alpha, beta);
          throw Error(ErrorCode::NegativeC, msg);
        }
        double fv = rec.forcing(x);
        Eigen::VectorXd bv = rec.drift(x);
        if (!std::isfinite(fv) || !bv.allFinite()) {
          throw Error(ErrorCode::NonFiniteValue, "b or f not finite");
        }
        if (bv.norm() > bound + tol || cv > bound + tol ||
            std::abs(fv) > bound + tol) {
          std::snprintf(msg, sizeof(msg),
                        "|b|=%.6g, c=%.6g or |f|=%.6g exceeds 1/delta=%.6g "
                        "at pair (%d, %d)",
                        bv.norm(), cv, std::abs(fv), bound, alpha, beta);
          throw Error(ErrorCode::BoundViolation, msg);
        }
      }
    }
  }
}

IsaacsProblem manufacture(const SmoothField& v_exact,
                          const IsaacsProblem& problem) {
  if (!v_exact.value || !v_exact.gradient || !v_exact.hessian) {
    throw Error(ErrorCode::ConfigError,
                "manufacture needs value, gradient and hessian callables");
  }
  IsaacsProblem::Spec spec(problem.domain());
  spec.n_alpha = problem.n_alpha();
  spec.n_beta = problem.n_beta();
  spec.delta = problem.delta();
  spec.holder_gamma1 = problem.holder_gamma1();
  spec.exact = v_exact;

  double sup_f = 0.0;
  auto pts = IsaacsProblem::sample_points(problem.domain(), 100);
  for (int alpha = 0; alpha < problem.n_alpha(); ++alpha) {
    for (int beta = 0; beta < problem.n_beta(); ++beta) {
      CoefficientRecord rec = problem.coeff(alpha, beta);
      CoefficientRecord base = rec;  // capture the original callables
      SmoothField v = v_exact;
      rec.f = [base, v](const Eigen::VectorXd& x) {
        double lv = base.diffusion(x).cwiseProduct(v.hessian(x)).sum() +
                    base.drift(x).dot(v.gradient(x)) -
                    base.zero_order(x) * v.value(x);
        return -lv;
      };
      for (const auto& x : pts) sup_f = std::max(sup_f, std::abs(rec.f(x)));
      spec.coefficients.push_back(std::move(rec));
    }
  }
  // The back-computed forcing may exceed the old 1/delta bound; relax
  // delta (which only loosens the bounds) rather than reject.
  if (sup_f > 1.0 / spec.delta) {
    spec.delta = std::min(spec.delta, 1.0 / (sup_f * (1.0 + 1e-9)));
  }
  return IsaacsProblem(std::move(spec));
}

double evaluate_hamiltonian(const IsaacsProblem& problem, const Symbol& sym,
                            const Eigen::VectorXd& x) {
  double sup = 0.0;
  for (int alpha = 0; alpha < problem.n_alpha(); ++alpha) {
    double inf = 0.0;
    for (int beta = 0; beta < problem.n_beta(); ++beta) {
      const CoefficientRecord& rec = problem.coeff(alpha, beta);
      double val = rec.diffusion(x).cwiseProduct(sym.hess).sum() +
                   rec.drift(x).dot(sym.grad) - rec.zero_order(x) * sym.u0 +
                   rec.forcing(x);
      if (beta == 0 || val < inf) inf = val;
    }
    if (alpha == 0 || inf > sup) sup = inf;
  }
  return sup;
}

}  // namespace isaacsfd
