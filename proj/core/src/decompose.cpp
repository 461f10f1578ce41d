#include "isaacsfd/decompose.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "isaacsfd/simplex.hpp"

namespace isaacsfd {

Eigen::MatrixXd Decomposition::reassemble_diffusion(
    const DirectionSet& lambda) const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(lambda.dims(), lambda.dims());
  for (int k = 0; k < lambda.half_size(); ++k) {
    a += second_order(k) * lambda.half_at(k).outer();
  }
  return a;
}

Eigen::VectorXd Decomposition::reassemble_drift(
    const DirectionSet& lambda) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(lambda.dims());
  for (int i = 0; i < lambda.size(); ++i) {
    b += first_order(i) * lambda.at(i).as_vector();
  }
  return b;
}

Decomposition decompose_diffusion(const Eigen::MatrixXd& a,
                                  const DirectionSet& lambda,
                                  double delta1_min) {
  const int d = lambda.dims();
  if (a.rows() != d || a.cols() != d || !a.allFinite()) {
    throw Error(ErrorCode::SingularInput,
                "diffusion matrix must be finite and d x d");
  }
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::SingularInput, "diffusion matrix not symmetric");
  }

  const int nh = lambda.half_size();
  const int n_eq = d * (d + 1) / 2;
  // Columns: [w_0..w_{nh-1}, t, s_0..s_{d-1}]; rows: reassembly equalities
  // then the floor constraints w_{e_i} - t - s_i = 0.
  const int n_cols = nh + 1 + d;
  const int n_rows = n_eq + d;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_rows, n_cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_rows);
  int row = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      for (int k = 0; k < nh; ++k) {
        const Direction& l = lambda.half_at(k);
        A(row, k) = double(l[i]) * double(l[j]);
      }
      b(row) = a(i, j);
      ++row;
    }
  }
  for (int axis = 0; axis < d; ++axis) {
    A(row, lambda.half_axis_index(axis)) = 1.0;
    A(row, nh) = -1.0;           // t
    A(row, nh + 1 + axis) = -1.0;  // slack
    ++row;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_cols);
  cost(nh) = 1.0;

  LpResult lp = solve_lp(A, b, cost, 1e-10);
  if (lp.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InsufficientStencil,
                "no nonnegative stencil weights reassemble this matrix; "
                "increase the direction set max-norm");
  }

  Decomposition out;
  out.second_order = lp.x.head(nh);
  out.first_order = Eigen::VectorXd::Zero(lambda.size());
  out.basis_floor = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < d; ++axis) {
    out.basis_floor =
        std::min(out.basis_floor, out.second_order(lambda.half_axis_index(axis)));
  }

  if (out.basis_floor < delta1_min) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "achievable coordinate-direction floor %.6g < required %.6g",
                  out.basis_floor, delta1_min);
    throw Error(ErrorCode::InsufficientStencil, msg);
  }

  double residual =
      (out.reassemble_diffusion(lambda) - a).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * scale) {
    throw Error(ErrorCode::SingularInput,
                "stencil weight reassembly residual exceeds tolerance");
  }
  return out;
}

Decomposition split_drift(const Eigen::VectorXd& b,
                          const DirectionSet& lambda) {
  const int d = lambda.dims();
  if (b.size() != d || !b.allFinite()) {
    throw Error(ErrorCode::SingularInput, "drift vector must be finite, size d");
  }
  Decomposition out;
  out.second_order = Eigen::VectorXd::Zero(lambda.half_size());
  out.first_order = Eigen::VectorXd::Zero(lambda.size());
  for (int axis = 0; axis < d; ++axis) {
    out.first_order(lambda.signed_axis_index(axis, true)) = std::max(b(axis), 0.0);
    out.first_order(lambda.signed_axis_index(axis, false)) = std::max(-b(axis), 0.0);
  }
  return out;
}

std::string round_key(const Eigen::MatrixXd& a) {
  std::string key;
  key.reserve(static_cast<size_t>(a.size()) * 20);
  char buf[32];
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.11e;", a(i, j));  // 12 significant digits
      key += buf;
    }
  }
  return key;
}

DecompositionCache::DecompositionCache(DirectionSet lambda, double delta1_min)
    : lambda_(std::move(lambda)),
      delta1_min_(delta1_min),
      min_floor_(std::numeric_limits<double>::infinity()) {}

std::shared_ptr<const Decomposition> DecompositionCache::diffusion(
    const Eigen::MatrixXd& a) {
  std::string key = round_key(a);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  auto dec = std::make_shared<Decomposition>(
      decompose_diffusion(a, lambda_, delta1_min_));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = map_.emplace(key, dec);
  if (inserted) min_floor_ = std::min(min_floor_, dec->basis_floor);
  return it->second;
}

size_t DecompositionCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return map_.size();
}

double DecompositionCache::min_basis_floor() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return min_floor_;
}

}  // namespace isaacsfd
