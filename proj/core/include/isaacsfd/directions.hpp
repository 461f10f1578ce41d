#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "isaacsfd/errors.hpp"

namespace isaacsfd {

/// One lattice step direction: a nonzero integer vector with coprime
/// components.
struct Direction {
  std::vector<int> components;

  int dim() const { return static_cast<int>(components.size()); }
  int operator[](int i) const { return components[static_cast<size_t>(i)]; }

  double norm() const;
  Eigen::VectorXd as_vector() const;
  /// Rank-one matrix l l^T used when reassembling diffusion coefficients.
  Eigen::MatrixXd outer() const;

  bool operator==(const Direction& other) const {
    return components == other.components;
  }
};

Direction negate(const Direction& l);
bool is_coordinate_axis(const Direction& l);

/// The finite direction set along which all differences are taken.
/// Closed under negation and contains every +-e_i; half_set holds one
/// representative per {l, -l} pair (the one whose first nonzero entry is
/// positive). radius is the radius of the smallest closed origin-centered
/// ball containing the set.
class DirectionSet {
 public:
  DirectionSet(int dims, int max_norm, std::vector<Direction> directions);

  int dims() const { return dims_; }
  int max_norm() const { return max_norm_; }
  double radius() const { return radius_; }

  const std::vector<Direction>& directions() const { return directions_; }
  const std::vector<int>& half_set() const { return half_set_; }
  int size() const { return static_cast<int>(directions_.size()); }
  int half_size() const { return static_cast<int>(half_set_.size()); }

  const Direction& at(int i) const { return directions_[static_cast<size_t>(i)]; }
  const Direction& half_at(int k) const {
    return directions_[static_cast<size_t>(half_set_[static_cast<size_t>(k)])];
  }

  /// Index of a direction in the full list, or -1.
  int find(const Direction& l) const;
  /// Index of direction +e_axis / -e_axis in the full list.
  int signed_axis_index(int axis, bool positive) const;
  /// Position of e_axis within half_set.
  int half_axis_index(int axis) const;

 private:
  int dims_;
  int max_norm_;
  double radius_;
  std::vector<Direction> directions_;
  std::vector<int> half_set_;
  std::vector<int> axis_plus_;   // full-list index of +e_i
  std::vector<int> axis_minus_;  // full-list index of -e_i
  std::vector<int> axis_half_;   // half_set position of e_i
};

/// All nonzero integer vectors with max-norm <= max_norm and coprime
/// components, ordered lexicographically. Symmetric under negation and
/// containing the coordinate basis by construction.
DirectionSet generate_lambda(int dims, int max_norm);

}  // namespace isaacsfd
