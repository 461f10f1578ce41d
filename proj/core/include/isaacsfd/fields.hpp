#pragma once

#include <functional>

#include <Eigen/Core>

namespace isaacsfd {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// A scalar field with analytic first and second derivatives; the shape
/// manufactured solutions and consistency probes are written in.
struct SmoothField {
  ScalarField value;
  VectorField gradient;
  MatrixField hessian;
};

inline ScalarField constant_scalar(double v) {
  return [v](const Eigen::VectorXd&) { return v; };
}

inline VectorField constant_vector(Eigen::VectorXd v) {
  return [v = std::move(v)](const Eigen::VectorXd&) { return v; };
}

inline MatrixField constant_matrix(Eigen::MatrixXd m) {
  return [m = std::move(m)](const Eigen::VectorXd&) { return m; };
}

}  // namespace isaacsfd
