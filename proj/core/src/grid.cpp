#include "isaacsfd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace isaacsfd {

Grid::Grid(Domain domain, double h, DirectionSet lambda)
    : domain_(std::move(domain)), lambda_(std::move(lambda)), h_(h) {
  if (h_ <= 0.0) throw Error(ErrorCode::ConfigError, "mesh size must be > 0");
  if (lambda_.dims() != domain_.dims()) {
    throw Error(ErrorCode::ConfigError,
                "direction set and domain dimension mismatch");
  }
  const int d = domain_.dims();
  auto [lo, hi] = domain_.bounding_box();

  std::vector<int> ilo(static_cast<size_t>(d)), ihi(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    ilo[static_cast<size_t>(i)] = static_cast<int>(std::floor(lo(i) / h_)) - 1;
    ihi[static_cast<size_t>(i)] = static_cast<int>(std::ceil(hi(i) / h_)) + 1;
  }

  // Odometer enumeration emits lattice coordinates in row-major
  // lexicographic order already; no sort needed.
  std::vector<int> iv = ilo;
  Eigen::VectorXd x(d);
  while (true) {
    for (int i = 0; i < d; ++i) x(i) = h_ * iv[static_cast<size_t>(i)];
    if (domain_.contains(x)) {
      lattice_.push_back(iv);
    }
    int i = d - 1;
    while (i >= 0 && iv[static_cast<size_t>(i)] == ihi[static_cast<size_t>(i)]) {
      iv[static_cast<size_t>(i)] = ilo[static_cast<size_t>(i)];
      --i;
    }
    if (i < 0) break;
    ++iv[static_cast<size_t>(i)];
  }

  const int n = size();
  coords_.resize(n, d);
  interior_mask_.assign(static_cast<size_t>(n), 0);
  const double ball_r = h_ * lambda_.radius();
  for (int p = 0; p < n; ++p) {
    for (int i = 0; i < d; ++i) {
      coords_(p, i) = h_ * lattice_[static_cast<size_t>(p)][static_cast<size_t>(i)];
    }
    Eigen::VectorXd xp = coords_.row(p);
    if (domain_.contains_ball(xp, ball_r)) {
      interior_mask_[static_cast<size_t>(p)] = 1;
      interior_.push_back(p);
    } else {
      boundary_.push_back(p);
    }
  }
  if (interior_.empty()) {
    throw Error(ErrorCode::EmptyInterior,
                "no interior lattice points; h too large for this domain "
                "and stencil radius");
  }

  // Stencil closure: every interior point must see both x +- h l in G_h.
  const int nh = lambda_.half_size();
  nb_plus_.assign(static_cast<size_t>(interior_.size()) * static_cast<size_t>(nh), -1);
  nb_minus_.assign(static_cast<size_t>(interior_.size()) * static_cast<size_t>(nh), -1);
  for (size_t ii = 0; ii < interior_.size(); ++ii) {
    int p = interior_[ii];
    for (int k = 0; k < nh; ++k) {
      const Direction& l = lambda_.half_at(k);
      int np = step(p, l, +1);
      int nm = step(p, l, -1);
      if (np < 0 || nm < 0) {
        throw Error(ErrorCode::StencilEscape,
                    "stencil closure violated during grid construction");
      }
      nb_plus_[ii * static_cast<size_t>(nh) + static_cast<size_t>(k)] = np;
      nb_minus_[ii * static_cast<size_t>(nh) + static_cast<size_t>(k)] = nm;
    }
  }

  // Interior connectivity under +-e_i steps, for diagnostics.
  std::vector<int> comp(static_cast<size_t>(n), -1);
  components_ = 0;
  std::vector<int> stack;
  for (int seed : interior_) {
    if (comp[static_cast<size_t>(seed)] >= 0) continue;
    comp[static_cast<size_t>(seed)] = components_;
    stack.push_back(seed);
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      for (int axis = 0; axis < d; ++axis) {
        const Direction& e = lambda_.at(lambda_.signed_axis_index(axis, true));
        for (int sign : {+1, -1}) {
          int q = step(p, e, sign);
          if (q >= 0 && interior_mask_[static_cast<size_t>(q)] &&
              comp[static_cast<size_t>(q)] < 0) {
            comp[static_cast<size_t>(q)] = components_;
            stack.push_back(q);
          }
        }
      }
    }
    ++components_;
  }
}

Eigen::VectorXd Grid::point(int idx) const { return coords_.row(idx); }

int Grid::find(const std::vector<int>& lattice) const {
  auto it = std::lower_bound(lattice_.begin(), lattice_.end(), lattice);
  if (it != lattice_.end() && *it == lattice) {
    return static_cast<int>(it - lattice_.begin());
  }
  return -1;
}

int Grid::step(int idx, const Direction& l, int sign) const {
  std::vector<int> target = lattice_[static_cast<size_t>(idx)];
  for (int i = 0; i < dims(); ++i) {
    target[static_cast<size_t>(i)] += sign * l[i];
  }
  return find(target);
}

std::shared_ptr<const Grid> build_grid(const Domain& domain, double h,
                                       const DirectionSet& lambda) {
  return std::make_shared<const Grid>(domain, h, lambda);
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, double fill)
    : grid_(std::move(grid)) {
  values_ = Eigen::VectorXd::Constant(grid_->size(), fill);
}

GridFunction restrict_field(const ScalarField& f,
                            std::shared_ptr<const Grid> grid) {
  GridFunction u(grid);
  for (int p = 0; p < u.size(); ++p) {
    double v = f(u.grid().point(p));
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue,
                  "field not finite at a grid point");
    }
    u[p] = v;
  }
  return u;
}

double sup_diff(const GridFunction& u, const GridFunction& w,
                GridSubset subset) {
  if (u.grid_ptr() != w.grid_ptr()) {
    throw Error(ErrorCode::GridMismatch,
                "sup_diff requires functions on the same grid");
  }
  auto over = [&](const std::vector<int>& idxs) {
    double m = 0.0;
    for (int p : idxs) m = std::max(m, std::abs(u[p] - w[p]));
    return m;
  };
  switch (subset) {
    case GridSubset::Interior:
      return over(u.grid().interior_indices());
    case GridSubset::Boundary:
      return over(u.grid().boundary_indices());
    case GridSubset::All:
      break;
  }
  double m = 0.0;
  for (int p = 0; p < u.size(); ++p) m = std::max(m, std::abs(u[p] - w[p]));
  return m;
}

void write_solution_csv(const GridFunction& u, std::ostream& os) {
  const int d = u.grid().dims();
  for (int i = 0; i < d; ++i) os << "x_" << (i + 1) << ",";
  os << "value\n";
  char buf[40];
  for (int p = 0; p < u.size(); ++p) {
    Eigen::VectorXd x = u.grid().point(p);
    for (int i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,", x(i));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", u[p]);
    os << buf;
  }
}

}  // namespace isaacsfd
