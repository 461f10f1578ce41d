#include "isaacsfd/catalog.hpp"

#include <cmath>
#include <set>

#include "isaacsfd/errors.hpp"

namespace isaacsfd {

namespace {

class Params {
 public:
  Params(const std::map<std::string, double>& given,
         std::set<std::string> known)
      : given_(given), known_(std::move(known)) {
    for (const auto& [key, value] : given_) {
      if (!known_.count(key)) {
        throw Error(ErrorCode::ConfigError, "unknown parameter '" + key + "'");
      }
    }
  }

  double get(const std::string& key, double fallback) const {
    auto it = given_.find(key);
    return it == given_.end() ? fallback : it->second;
  }

 private:
  const std::map<std::string, double>& given_;
  std::set<std::string> known_;
};

Eigen::MatrixXd alternating_diag(int d, double mu) {
  Eigen::VectorXd diag(d);
  for (int i = 0; i < d; ++i) diag(i) = (i % 2 == 0) ? mu : 1.0 / mu;
  return diag.asDiagonal();
}

// Exact solution of tr(D2 v) + f = 0 with v = 0 on the boundary of the
// built-in ball/ellipsoid: v = f (1 - q) / (2 sum s_i^-2).
SmoothField poisson_exact(const Domain& domain, double f_val) {
  SmoothField q = domain.boundary_profile();
  double s = 0.0;
  for (int i = 0; i < domain.dims(); ++i) {
    s += 1.0 / (domain.semi_axes()(i) * domain.semi_axes()(i));
  }
  double scale = f_val / (2.0 * s);
  SmoothField v;
  v.value = [q, scale](const Eigen::VectorXd& x) {
    return scale * (1.0 - q.value(x));
  };
  v.gradient = [q, scale](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-scale * q.gradient(x));
  };
  v.hessian = [q, scale](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(-scale * q.hessian(x));
  };
  return v;
}

IsaacsProblem poisson_ball(const Params& p, const Domain& domain) {
  double f_val = p.get("f", 1.0);
  IsaacsProblem::Spec spec(domain);
  spec.delta = std::min(1.0, 1.0 / std::max(1.0, std::abs(f_val)));
  CoefficientRecord rec;
  rec.a = constant_matrix(Eigen::MatrixXd::Identity(domain.dims(), domain.dims()));
  rec.f = constant_scalar(f_val);
  spec.coefficients.push_back(std::move(rec));
  if (domain.kind() != Domain::Kind::LevelSet) {
    spec.exact = poisson_exact(domain, f_val);
  }
  return IsaacsProblem(std::move(spec));
}

IsaacsProblem variable_linear(const Params& p, const Domain& domain) {
  if (domain.dims() != 2) {
    throw Error(ErrorCode::ConfigError, "variable-linear is a d=2 problem");
  }
  double mu = p.get("mu", 1.5);
  double omega = p.get("omega", 1.0);
  double f_val = p.get("f", 1.0);
  if (mu < 1.0) throw Error(ErrorCode::ConfigError, "mu must be >= 1");

  IsaacsProblem::Spec spec(domain);
  spec.delta = std::min(1.0 / mu, 1.0 / std::max(1.0, std::abs(f_val)));
  CoefficientRecord rec;
  rec.a = [mu, omega](const Eigen::VectorXd& x) {
    double t = omega * (x(0) + x(1));
    Eigen::Vector2d u(std::cos(t), std::sin(t));
    Eigen::Vector2d v(-std::sin(t), std::cos(t));
    return Eigen::MatrixXd(mu * u * u.transpose() +
                           (1.0 / mu) * v * v.transpose());
  };
  rec.f = constant_scalar(f_val);
  spec.coefficients.push_back(std::move(rec));
  return IsaacsProblem(std::move(spec));
}

IsaacsProblem bellman_2(const Params& p, const Domain& domain) {
  double mu = p.get("mu", 1.5);
  double f1 = p.get("f1", 1.0);
  double f2 = p.get("f2", 1.0);
  double wave = p.get("k", 3.0);
  double c2 = p.get("c2", 0.2);
  if (mu < 1.0) throw Error(ErrorCode::ConfigError, "mu must be >= 1");
  const int d = domain.dims();

  IsaacsProblem::Spec spec(domain);
  spec.n_alpha = 2;
  double sup_f = std::max({1.0, std::abs(f1), std::abs(f2), c2});
  spec.delta = std::min(1.0 / mu, 1.0 / sup_f);

  CoefficientRecord r1;
  r1.a = constant_matrix(Eigen::MatrixXd::Identity(d, d));
  r1.f = constant_scalar(f1);
  spec.coefficients.push_back(std::move(r1));

  CoefficientRecord r2;
  r2.a = constant_matrix(alternating_diag(d, mu));
  r2.c = constant_scalar(c2);
  r2.f = [f2, wave](const Eigen::VectorXd& x) {
    return f2 * std::cos(wave * x(0));
  };
  spec.coefficients.push_back(std::move(r2));
  return IsaacsProblem(std::move(spec));
}

IsaacsProblem isaacs_2x2(const Params& p, const Domain& domain) {
  if (domain.dims() != 2) {
    throw Error(ErrorCode::ConfigError, "isaacs-2x2 is a d=2 problem");
  }
  double mu = p.get("mu", 1.5);
  double nu = p.get("nu", 0.3);
  double chi = p.get("chi", 0.25);
  double amp = p.get("s", 1.0);
  double wave = p.get("k", 3.0);
  if (mu < 1.0) throw Error(ErrorCode::ConfigError, "mu must be >= 1");

  IsaacsProblem::Spec spec(domain);
  spec.n_alpha = 2;
  spec.n_beta = 2;
  spec.delta = std::min(1.0 / mu,
                        1.0 / std::max({1.0, std::abs(amp), nu, chi}));

  Eigen::Matrix2d a11 = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d a12 = Eigen::Vector2d(mu, 1.0 / mu).asDiagonal();
  Eigen::Matrix2d a21 = Eigen::Vector2d(1.0 / mu, mu).asDiagonal();
  Eigen::Matrix2d a22;
  a22 << 0.5 * (mu + 1.0 / mu), 0.5 * (mu - 1.0 / mu),
      0.5 * (mu - 1.0 / mu), 0.5 * (mu + 1.0 / mu);

  auto record = [&](const Eigen::Matrix2d& a, const Eigen::Vector2d& b,
                    double c, ScalarField f) {
    CoefficientRecord rec;
    rec.a = constant_matrix(a);
    rec.b = constant_vector(b);
    rec.c = constant_scalar(c);
    rec.f = std::move(f);
    return rec;
  };

  spec.coefficients.push_back(record(
      a11, {nu, 0.0}, 0.0,
      [amp, wave](const Eigen::VectorXd& x) { return amp * std::cos(wave * x(0)); }));
  spec.coefficients.push_back(record(
      a12, {0.0, -nu}, chi,
      [amp, wave](const Eigen::VectorXd& x) { return amp * std::sin(wave * x(1)); }));
  spec.coefficients.push_back(record(
      a21, {-nu, 0.0}, 0.0,
      [amp, wave](const Eigen::VectorXd& x) { return -amp * std::cos(wave * x(1)); }));
  spec.coefficients.push_back(record(
      a22, {0.0, nu}, chi, [amp, wave](const Eigen::VectorXd& x) {
        return amp * std::sin(wave * x(0)) * std::sin(wave * x(1));
      }));
  return IsaacsProblem(std::move(spec));
}

SmoothField cosine_bump(const Domain& domain, double amp) {
  SmoothField q = domain.boundary_profile();
  const double half_pi = 0.5 * M_PI;
  SmoothField v;
  v.value = [q, amp, half_pi](const Eigen::VectorXd& x) {
    return amp * std::cos(half_pi * q.value(x));
  };
  v.gradient = [q, amp, half_pi](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-amp * half_pi * std::sin(half_pi * q.value(x)) *
                           q.gradient(x));
  };
  v.hessian = [q, amp, half_pi](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = q.gradient(x);
    double qv = q.value(x);
    return Eigen::MatrixXd(
        -amp * half_pi *
        (half_pi * std::cos(half_pi * qv) * g * g.transpose() +
         std::sin(half_pi * qv) * q.hessian(x)));
  };
  return v;
}

SmoothField poly_bump(const Domain& domain, double amp) {
  SmoothField q = domain.boundary_profile();
  SmoothField v;
  v.value = [q, amp](const Eigen::VectorXd& x) {
    return amp * (1.0 - q.value(x));
  };
  v.gradient = [q, amp](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-amp * q.gradient(x));
  };
  v.hessian = [q, amp](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(-amp * q.hessian(x));
  };
  return v;
}

IsaacsProblem manufactured_isaacs(const std::map<std::string, double>& params,
                                  const Domain& domain) {
  if (domain.kind() == Domain::Kind::LevelSet) {
    throw Error(ErrorCode::ConfigError,
                "manufactured-isaacs needs a ball or ellipsoid domain");
  }
  std::map<std::string, double> base_params = params;
  double amp = 1.0, poly = 0.0;
  if (auto it = base_params.find("amplitude"); it != base_params.end()) {
    amp = it->second;
    base_params.erase(it);
  }
  if (auto it = base_params.find("poly"); it != base_params.end()) {
    poly = it->second;
    base_params.erase(it);
  }
  Params check(base_params, {"mu", "nu", "chi", "s", "k"});
  IsaacsProblem base = isaacs_2x2(check, domain);
  SmoothField v =
      poly != 0.0 ? poly_bump(domain, amp) : cosine_bump(domain, amp);
  return manufacture(v, base);
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"poisson-ball", "variable-linear", "bellman-2", "isaacs-2x2",
          "manufactured-isaacs"};
}

IsaacsProblem make_catalog_problem(const std::string& name,
                                   const std::map<std::string, double>& params,
                                   const Domain& domain) {
  if (name == "poisson-ball") {
    return poisson_ball(Params(params, {"f"}), domain);
  }
  if (name == "variable-linear") {
    return variable_linear(Params(params, {"mu", "omega", "f"}), domain);
  }
  if (name == "bellman-2") {
    return bellman_2(Params(params, {"mu", "f1", "f2", "k", "c2"}), domain);
  }
  if (name == "isaacs-2x2") {
    return isaacs_2x2(Params(params, {"mu", "nu", "chi", "s", "k"}), domain);
  }
  if (name == "manufactured-isaacs") {
    return manufactured_isaacs(params, domain);
  }
  std::string known;
  for (const auto& n : catalog_names()) known += " " + n;
  throw Error(ErrorCode::ConfigError,
              "unknown problem '" + name + "'; catalog:" + known);
}

}  // namespace isaacsfd
