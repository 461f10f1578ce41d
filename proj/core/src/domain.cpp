#include "isaacsfd/domain.hpp"

#include <cmath>

namespace isaacsfd {

Domain Domain::ball(Eigen::VectorXd center, double radius) {
  if (radius <= 0.0 || !center.allFinite()) {
    throw Error(ErrorCode::ConfigError, "ball needs finite center, radius > 0");
  }
  Domain d;
  d.kind_ = Kind::Ball;
  d.dims_ = static_cast<int>(center.size());
  d.center_ = center;
  d.radius_ = radius;
  d.semi_axes_ = Eigen::VectorXd::Constant(d.dims_, radius);
  d.phi_ = [center, radius](const Eigen::VectorXd& x) {
    return (x - center).norm() - radius;
  };
  d.box_lo_ = center.array() - radius;
  d.box_hi_ = center.array() + radius;
  return d;
}

Domain Domain::interval(double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::ConfigError, "interval needs lo < hi");
  Eigen::VectorXd center(1);
  center(0) = 0.5 * (lo + hi);
  return ball(center, 0.5 * (hi - lo));
}

Domain Domain::ellipsoid(Eigen::VectorXd semi_axes) {
  if (semi_axes.size() < 1 || semi_axes.minCoeff() <= 0.0) {
    throw Error(ErrorCode::ConfigError, "ellipsoid needs positive semi-axes");
  }
  Domain d;
  d.kind_ = Kind::Ellipsoid;
  d.dims_ = static_cast<int>(semi_axes.size());
  d.center_ = Eigen::VectorXd::Zero(d.dims_);
  d.radius_ = semi_axes.minCoeff();
  d.semi_axes_ = semi_axes;
  d.phi_ = [semi_axes](const Eigen::VectorXd& x) {
    return (x.array() / semi_axes.array()).matrix().squaredNorm() - 1.0;
  };
  d.box_lo_ = -semi_axes;
  d.box_hi_ = semi_axes;
  return d;
}

Domain Domain::level_set(int dims, ScalarField phi, double phi_lipschitz,
                         Eigen::VectorXd box_lo, Eigen::VectorXd box_hi) {
  if (dims < 1 || !phi || phi_lipschitz <= 0.0) {
    throw Error(ErrorCode::ConfigError,
                "level_set needs dims >= 1, a level function and a "
                "positive Lipschitz bound");
  }
  Domain d;
  d.kind_ = Kind::LevelSet;
  d.dims_ = dims;
  d.phi_ = std::move(phi);
  d.lipschitz_ = phi_lipschitz;
  d.box_lo_ = std::move(box_lo);
  d.box_hi_ = std::move(box_hi);
  d.center_ = Eigen::VectorXd::Zero(dims);
  return d;
}

bool Domain::contains_ball(const Eigen::VectorXd& x, double r) const {
  switch (kind_) {
    case Kind::Ball:
      return (x - center_).norm() + r < radius_;
    case Kind::Ellipsoid: {
      if (phi_(x) >= 0.0) return false;
      return ellipsoid_boundary_distance(semi_axes_, x) > r;
    }
    case Kind::LevelSet: {
      double phi = phi_(x);
      return phi < 0.0 && -phi > r * lipschitz_;
    }
  }
  return false;
}

SmoothField Domain::boundary_profile() const {
  if (kind_ == Kind::LevelSet) {
    throw Error(ErrorCode::ConfigError,
                "boundary_profile requires a ball or ellipsoid domain");
  }
  Eigen::VectorXd c = center_;
  Eigen::VectorXd inv_sq = semi_axes_.array().square().inverse();
  SmoothField q;
  q.value = [c, inv_sq](const Eigen::VectorXd& x) {
    return ((x - c).array().square() * inv_sq.array()).sum();
  };
  q.gradient = [c, inv_sq](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(2.0 * (x - c).array() * inv_sq.array());
  };
  q.hessian = [inv_sq](const Eigen::VectorXd&) {
    return Eigen::MatrixXd((2.0 * inv_sq).asDiagonal());
  };
  return q;
}

double ellipsoid_boundary_distance(const Eigen::VectorXd& semi_axes,
                                   const Eigen::VectorXd& x) {
  // Nearest boundary point solves y_i = s_i^2 x_i / (s_i^2 + t) with
  // sum (y_i / s_i)^2 = 1. For interior x the Lagrange parameter t lies
  // in (-min s_i^2, 0); F(t) below is decreasing there.
  const double min_sq = semi_axes.minCoeff() * semi_axes.minCoeff();
  auto F = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double si2 = semi_axes(i) * semi_axes(i);
      double num = semi_axes(i) * x(i);
      s += (num * num) / ((si2 + t) * (si2 + t));
    }
    return s;
  };
  if (F(0.0) >= 1.0) return 0.0;  // on or outside the boundary

  double lo = -min_sq * (1.0 - 1e-15);
  double hi = 0.0;
  if (F(lo) >= 1.0) {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (F(mid) >= 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double t = 0.5 * (lo + hi);
    double dist_sq = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double si2 = semi_axes(i) * semi_axes(i);
      double yi = si2 * x(i) / (si2 + t);
      dist_sq += (yi - x(i)) * (yi - x(i));
    }
    return std::sqrt(dist_sq);
  }

  // x vanishes (to fp resolution) along every minimal axis and the root
  // escapes the bracket: the nearest point sits at t = -min_sq exactly,
  // picking up a component of its own along a minimal axis.
  double sum_q = 0.0;
  double dist_sq = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    double si2 = semi_axes(i) * semi_axes(i);
    if (si2 - min_sq > 0.0) {
      double yi = si2 * x(i) / (si2 - min_sq);
      sum_q += (yi / semi_axes(i)) * (yi / semi_axes(i));
      dist_sq += (yi - x(i)) * (yi - x(i));
    }
  }
  dist_sq += min_sq * std::max(1.0 - sum_q, 0.0);
  return std::sqrt(dist_sq);
}

}  // namespace isaacsfd
