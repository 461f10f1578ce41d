#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "isaacsfd/directions.hpp"
#include "isaacsfd/domain.hpp"
#include "isaacsfd/fields.hpp"

namespace isaacsfd {

/// The lattice sets of mesh size h inside a domain: all of G_h, the
/// interior points whose h-scaled stencil ball stays in G, and the
/// boundary layer where the zero Dirichlet data is imposed. Points are
/// ordered lexicographically by lattice coordinates; immutable after
/// construction.
class Grid {
 public:
  Grid(Domain domain, double h, DirectionSet lambda);

  const Domain& domain() const { return domain_; }
  const DirectionSet& lambda() const { return lambda_; }
  double h() const { return h_; }
  int dims() const { return domain_.dims(); }
  double stencil_radius() const { return lambda_.radius(); }

  int size() const { return static_cast<int>(lattice_.size()); }
  int interior_size() const { return static_cast<int>(interior_.size()); }
  int boundary_size() const { return static_cast<int>(boundary_.size()); }

  bool is_interior(int idx) const { return interior_mask_[static_cast<size_t>(idx)]; }
  const std::vector<int>& interior_indices() const { return interior_; }
  const std::vector<int>& boundary_indices() const { return boundary_; }

  Eigen::VectorXd point(int idx) const;
  const std::vector<int>& lattice_coords(int idx) const {
    return lattice_[static_cast<size_t>(idx)];
  }

  /// Ordinal of the lattice point, or -1 if not in G_h.
  int find(const std::vector<int>& lattice) const;
  /// Ordinal of x_idx + sign*h*l, or -1 if it escapes G_h.
  int step(int idx, const Direction& l, int sign) const;

  /// Precomputed stencil neighbors for the ii-th interior point and the
  /// k-th half_set direction.
  int interior_neighbor(int ii, int k, bool plus) const {
    size_t base = (static_cast<size_t>(ii) * static_cast<size_t>(lambda_.half_size()) +
                   static_cast<size_t>(k));
    return plus ? nb_plus_[base] : nb_minus_[base];
  }

  /// Number of connected components of the interior under coordinate
  /// steps (diagnostic; coarse meshes can disconnect).
  int interior_component_count() const { return components_; }

 private:
  Domain domain_;
  DirectionSet lambda_;
  double h_;
  std::vector<std::vector<int>> lattice_;
  Eigen::MatrixXd coords_;  // size x d
  std::vector<char> interior_mask_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  std::vector<int> nb_plus_, nb_minus_;
  int components_ = 0;
};

std::shared_ptr<const Grid> build_grid(const Domain& domain, double h,
                                       const DirectionSet& lambda);

/// Real values over G_h, in grid index order.
class GridFunction {
 public:
  explicit GridFunction(std::shared_ptr<const Grid> grid, double fill = 0.0);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int idx) const { return values_(idx); }
  double& operator[](int idx) { return values_(idx); }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

 private:
  std::shared_ptr<const Grid> grid_;
  Eigen::VectorXd values_;
};

enum class GridSubset { All, Interior, Boundary };

/// Pointwise evaluation of f over G_h; throws NonFiniteValue if f is not
/// finite at some grid point.
GridFunction restrict_field(const ScalarField& f,
                            std::shared_ptr<const Grid> grid);

/// max over the subset of |u - w|; the grids must be the same object.
double sup_diff(const GridFunction& u, const GridFunction& w,
                GridSubset subset = GridSubset::All);

/// CSV with header x_1,...,x_d,value, one row per G_h point in index
/// order, 17-significant-digit floats.
void write_solution_csv(const GridFunction& u, std::ostream& os);

}  // namespace isaacsfd
