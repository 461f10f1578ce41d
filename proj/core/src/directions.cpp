#include "isaacsfd/directions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isaacsfd {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InsufficientStencil: return "InsufficientStencil";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::StencilEscape: return "StencilEscape";
    case ErrorCode::EllipticityViolation: return "EllipticityViolation";
    case ErrorCode::NegativeC: return "NegativeC";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::DegenerateStencil: return "DegenerateStencil";
    case ErrorCode::NonNestedGrids: return "NonNestedGrids";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

double Direction::norm() const {
  double s = 0.0;
  for (int c : components) s += double(c) * double(c);
  return std::sqrt(s);
}

Eigen::VectorXd Direction::as_vector() const {
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = components[static_cast<size_t>(i)];
  return v;
}

Eigen::MatrixXd Direction::outer() const {
  Eigen::VectorXd v = as_vector();
  return v * v.transpose();
}

Direction negate(const Direction& l) {
  Direction n = l;
  for (int& c : n.components) c = -c;
  return n;
}

bool is_coordinate_axis(const Direction& l) {
  int nonzero = 0;
  for (int c : l.components) {
    if (c != 0) {
      if (std::abs(c) != 1) return false;
      ++nonzero;
    }
  }
  return nonzero == 1;
}

namespace {

bool first_nonzero_positive(const Direction& l) {
  for (int c : l.components) {
    if (c != 0) return c > 0;
  }
  return false;
}

int components_gcd(const std::vector<int>& v) {
  int g = 0;
  for (int c : v) g = std::gcd(g, std::abs(c));
  return g;
}

}  // namespace

DirectionSet::DirectionSet(int dims, int max_norm,
                           std::vector<Direction> directions)
    : dims_(dims), max_norm_(max_norm), directions_(std::move(directions)) {
  radius_ = 0.0;
  for (const auto& l : directions_) radius_ = std::max(radius_, l.norm());

  for (int i = 0; i < size(); ++i) {
    if (first_nonzero_positive(directions_[static_cast<size_t>(i)])) {
      half_set_.push_back(i);
    }
  }

  axis_plus_.assign(static_cast<size_t>(dims_), -1);
  axis_minus_.assign(static_cast<size_t>(dims_), -1);
  axis_half_.assign(static_cast<size_t>(dims_), -1);
  for (int axis = 0; axis < dims_; ++axis) {
    Direction e{std::vector<int>(static_cast<size_t>(dims_), 0)};
    e.components[static_cast<size_t>(axis)] = 1;
    axis_plus_[static_cast<size_t>(axis)] = find(e);
    axis_minus_[static_cast<size_t>(axis)] = find(negate(e));
    for (int k = 0; k < half_size(); ++k) {
      if (half_at(k) == e) axis_half_[static_cast<size_t>(axis)] = k;
    }
    if (axis_plus_[static_cast<size_t>(axis)] < 0 ||
        axis_minus_[static_cast<size_t>(axis)] < 0 ||
        axis_half_[static_cast<size_t>(axis)] < 0) {
      throw Error(ErrorCode::SingularInput,
                  "direction set is missing a coordinate basis vector");
    }
  }
}

int DirectionSet::find(const Direction& l) const {
  for (int i = 0; i < size(); ++i) {
    if (directions_[static_cast<size_t>(i)] == l) return i;
  }
  return -1;
}

int DirectionSet::signed_axis_index(int axis, bool positive) const {
  return positive ? axis_plus_[static_cast<size_t>(axis)]
                  : axis_minus_[static_cast<size_t>(axis)];
}

int DirectionSet::half_axis_index(int axis) const {
  return axis_half_[static_cast<size_t>(axis)];
}

DirectionSet generate_lambda(int dims, int max_norm) {
  if (dims < 1) throw Error(ErrorCode::SingularInput, "dims must be >= 1");
  if (max_norm < 1) throw Error(ErrorCode::SingularInput, "max_norm must be >= 1");

  std::vector<Direction> out;
  std::vector<int> v(static_cast<size_t>(dims), -max_norm);
  // Odometer over {-m..m}^d in lexicographic order.
  while (true) {
    Direction cand{v};
    int g = components_gcd(v);
    if (g == 1) out.push_back(cand);
    int i = dims - 1;
    while (i >= 0 && v[static_cast<size_t>(i)] == max_norm) {
      v[static_cast<size_t>(i)] = -max_norm;
      --i;
    }
    if (i < 0) break;
    ++v[static_cast<size_t>(i)];
  }
  return DirectionSet(dims, max_norm, std::move(out));
}

}  // namespace isaacsfd
