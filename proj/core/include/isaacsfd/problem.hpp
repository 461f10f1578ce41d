#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "isaacsfd/domain.hpp"
#include "isaacsfd/fields.hpp"

namespace isaacsfd {

/// Coefficients of one linear operator L^{ab}: either the diffusion a
/// directly or a factor sigma with a = sigma sigma^T / 2, plus drift,
/// zero-order term and forcing. Empty fields read as zero.
struct CoefficientRecord {
  MatrixField a;
  MatrixField sigma;
  VectorField b;
  ScalarField c;
  ScalarField f;

  Eigen::MatrixXd diffusion(const Eigen::VectorXd& x) const;
  Eigen::VectorXd drift(const Eigen::VectorXd& x) const;
  double zero_order(const Eigen::VectorXd& x) const;
  double forcing(const Eigen::VectorXd& x) const;
};

/// A two-control-family problem over a domain: finite ordered control
/// sets indexed 0..n_alpha-1 (maximizer) and 0..n_beta-1 (minimizer),
/// one CoefficientRecord per pair, and the ellipticity constant delta.
/// Immutable once built; construction spot-checks the coefficient
/// invariants on sampled domain points.
class IsaacsProblem {
 public:
  struct Spec {
    explicit Spec(Domain dom) : domain(std::move(dom)) {}

    Domain domain;
    int n_alpha = 1;
    int n_beta = 1;
    double delta = 1.0;
    double holder_gamma1 = 1.0;
    /// alpha-major: coefficients[alpha * n_beta + beta].
    std::vector<CoefficientRecord> coefficients;
    std::optional<SmoothField> exact;
    bool validate = true;
    int validation_samples = 100;
  };

  explicit IsaacsProblem(Spec spec);

  const Domain& domain() const { return spec_.domain; }
  int dims() const { return spec_.domain.dims(); }
  int n_alpha() const { return spec_.n_alpha; }
  int n_beta() const { return spec_.n_beta; }
  double delta() const { return spec_.delta; }
  double holder_gamma1() const { return spec_.holder_gamma1; }

  const CoefficientRecord& coeff(int alpha, int beta) const {
    return spec_.coefficients[static_cast<size_t>(alpha * spec_.n_beta + beta)];
  }

  const std::optional<SmoothField>& exact_solution() const {
    return spec_.exact;
  }

  /// Deterministic sample of interior points used for validation and
  /// coefficient scans.
  static std::vector<Eigen::VectorXd> sample_points(const Domain& domain,
                                                    int count);

 private:
  void validate() const;
  Spec spec_;
};

inline IsaacsProblem build_problem(IsaacsProblem::Spec spec) {
  return IsaacsProblem(std::move(spec));
}

/// Replaces every forcing with f := -(a : D2 v + b . D v - c v) so that
/// v_exact solves the continuous equation with every control pair
/// indifferent. delta is relaxed when the new forcing exceeds the old
/// bound. The result carries v_exact as its exact solution.
IsaacsProblem manufacture(const SmoothField& v_exact,
                          const IsaacsProblem& problem);

/// Value / gradient / Hessian triple at a point; the argument the
/// pointwise operators act on.
struct Symbol {
  double u0 = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Continuous sup-inf of the symbol contraction at x:
/// sup_a inf_b [a^{ab}(x) : hess + b^{ab}(x) . grad - c^{ab}(x) u0 + f^{ab}(x)].
double evaluate_hamiltonian(const IsaacsProblem& problem, const Symbol& sym,
                            const Eigen::VectorXd& x);

}  // namespace isaacsfd
