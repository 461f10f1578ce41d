#pragma once

#include <utility>

#include <Eigen/Core>

#include "isaacsfd/errors.hpp"
#include "isaacsfd/fields.hpp"

namespace isaacsfd {

/// Open bounded domain G = { x : phi(x) < 0 }. Built-in balls, intervals
/// and axis-aligned ellipsoids carry exact ball-containment tests; the
/// generic level-set form falls back to a Lipschitz bound on phi.
class Domain {
 public:
  enum class Kind { Ball, Ellipsoid, LevelSet };

  static Domain ball(Eigen::VectorXd center, double radius);
  /// d=1 ball, G = (lo, hi).
  static Domain interval(double lo, double hi);
  /// Centered at the origin: sum (x_i / semi_axes_i)^2 < 1.
  static Domain ellipsoid(Eigen::VectorXd semi_axes);
  /// phi_lipschitz must bound |grad phi| from above on a neighborhood of
  /// G; contains_ball then certifies x + B_r in G via -phi(x) > r * L.
  static Domain level_set(int dims, ScalarField phi, double phi_lipschitz,
                          Eigen::VectorXd box_lo, Eigen::VectorXd box_hi);

  int dims() const { return dims_; }
  Kind kind() const { return kind_; }

  double level(const Eigen::VectorXd& x) const { return phi_(x); }
  bool contains(const Eigen::VectorXd& x) const { return phi_(x) < 0.0; }
  /// True iff the closed ball of radius r about x lies inside G.
  bool contains_ball(const Eigen::VectorXd& x, double r) const;

  std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const {
    return {box_lo_, box_hi_};
  }

  // Shape parameters of the built-ins (used by catalog problems that
  // need solutions vanishing on the boundary).
  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return radius_; }
  const Eigen::VectorXd& semi_axes() const { return semi_axes_; }

  /// q(x) = sum ((x_i - c_i) / s_i)^2, the built-in level profile with
  /// q = 1 on the boundary. Throws for level-set domains.
  SmoothField boundary_profile() const;

 private:
  Domain() = default;

  Kind kind_ = Kind::LevelSet;
  int dims_ = 0;
  ScalarField phi_;
  double lipschitz_ = 0.0;
  Eigen::VectorXd box_lo_, box_hi_;
  Eigen::VectorXd center_;
  double radius_ = 0.0;
  Eigen::VectorXd semi_axes_;
};

/// Distance from an interior point to the boundary of the origin-centered
/// axis-aligned ellipsoid (bisection on the Lagrange parameter; exact to
/// near machine precision).
double ellipsoid_boundary_distance(const Eigen::VectorXd& semi_axes,
                                   const Eigen::VectorXd& x);

}  // namespace isaacsfd
