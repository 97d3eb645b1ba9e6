// SPDX-License-Identifier: Apache-2.0
#include "mcflow/grid_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mcflow/error.hpp"

namespace mcf {
namespace {

double squared(double x) { return x * x; }

void require(bool condition, const std::string& message) {
  if (!condition) throw validation_error(message);
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void DomainSpec::validate() const {
  require(n >= 2 && n <= 4, "domain: n must be 2, 3 or 4");
  require(std::isfinite(h) && h > 0, "domain: h must be positive");
  const auto un = static_cast<std::size_t>(n);
  if (kind == DomainKind::box) {
    require(lower.size() == un && upper.size() == un,
            "domain: box needs n lower and n upper bounds");
    require(finite_all(lower) && finite_all(upper), "domain: non-finite box bound");
    for (int i = 0; i < n; ++i) {
      const double side = upper[i] - lower[i];
      require(side > 0, "domain: box side lengths must be positive");
      const double cells = side / h;
      require(std::abs(cells - std::round(cells)) <= 1e-9 * std::max(1.0, cells),
              "domain: box side " + std::to_string(i) + " is not a multiple of h");
    }
  } else {
    require(center.size() == un, "domain: ball needs n center coordinates");
    require(finite_all(center), "domain: non-finite ball center");
    require(std::isfinite(radius) && radius > 0, "domain: ball radius must be positive");
  }
}

double diameter(const DomainSpec& spec) {
  if (spec.kind == DomainKind::ball) return 2.0 * spec.radius;
  double sum = 0.0;
  for (int i = 0; i < spec.n; ++i) sum += squared(spec.upper[i] - spec.lower[i]);
  return std::sqrt(sum);
}

double volume(const DomainSpec& spec) {
  if (spec.kind == DomainKind::box) {
    double v = 1.0;
    for (int i = 0; i < spec.n; ++i) v *= spec.upper[i] - spec.lower[i];
    return v;
  }
  const double half_n = 0.5 * spec.n;
  return std::pow(std::numbers::pi, half_n) / std::tgamma(half_n + 1.0) *
         std::pow(spec.radius, spec.n);
}

double Hyperplane::distance(const Point& y) const {
  double d = 0.0;
  for (int i = 0; i < n; ++i) d += normal[i] * (y[i] - origin[i]);
  return d;
}

Hyperplane supporting_hyperplane(const DomainSpec& spec, const Point& p) {
  spec.validate();
  const double tol = 1e-12 * diameter(spec);
  Hyperplane plane;
  plane.n = spec.n;
  plane.origin = p;
  if (spec.kind == DomainKind::ball) {
    double dist = 0.0;
    for (int i = 0; i < spec.n; ++i) dist += squared(p[i] - spec.center[i]);
    dist = std::sqrt(dist);
    require(std::abs(dist - spec.radius) <= tol,
            "supporting_hyperplane: point is not on the sphere");
    for (int i = 0; i < spec.n; ++i) {
      plane.normal[i] = (spec.center[i] - p[i]) / dist;
    }
    return plane;
  }
  int face_axis = -1;
  double face_sign = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    require(p[i] >= spec.lower[i] - tol && p[i] <= spec.upper[i] + tol,
            "supporting_hyperplane: point is outside the box");
    if (face_axis < 0 && std::abs(p[i] - spec.lower[i]) <= tol) {
      face_axis = i;
      face_sign = 1.0;
    } else if (face_axis < 0 && std::abs(p[i] - spec.upper[i]) <= tol) {
      face_axis = i;
      face_sign = -1.0;
    }
  }
  require(face_axis >= 0, "supporting_hyperplane: point is not on a box face");
  plane.normal[face_axis] = face_sign;
  return plane;
}

Lattice Lattice::build(const DomainSpec& spec) {
  spec.validate();
  Lattice lat;
  lat.spec_ = spec;
  const int n = spec.n;
  const double h = spec.h;
  const double tol = 1e-12 * diameter(spec);

  if (spec.kind == DomainKind::box) {
    for (int i = 0; i < n; ++i) {
      lat.shape_[i] = static_cast<int>(std::lround((spec.upper[i] - spec.lower[i]) / h)) + 1;
      lat.origin_[i] = spec.lower[i];
    }
  } else {
    const int K = static_cast<int>(std::floor(spec.radius / h * (1.0 + 1e-12)));
    for (int i = 0; i < n; ++i) {
      lat.shape_[i] = 2 * K + 1;
      lat.origin_[i] = spec.center[i] - K * h;
    }
  }
  std::size_t total = 1;
  for (int i = n - 1; i >= 0; --i) {
    lat.stride_[i] = total;
    total *= static_cast<std::size_t>(lat.shape_[i]);
  }

  lat.classes_.resize(total);
  for (std::size_t node = 0; node < total; ++node) {
    const auto idx = lat.multi_index(node);
    NodeClass cls = NodeClass::interior;
    if (spec.kind == DomainKind::box) {
      for (int i = 0; i < n; ++i) {
        if (idx[i] == 0 || idx[i] == lat.shape_[i] - 1) cls = NodeClass::boundary;
      }
    } else {
      const Point x = lat.coord(node);
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += squared(x[i] - spec.center[i]);
      const double d = std::sqrt(d2);
      if (std::abs(d - spec.radius) <= tol) {
        cls = NodeClass::boundary;
      } else if (d > spec.radius) {
        cls = NodeClass::exterior;
      }
    }
    lat.classes_[node] = cls;
  }

  lat.interior_pos_.assign(total, -1);
  for (std::size_t node = 0; node < total; ++node) {
    if (lat.classes_[node] == NodeClass::interior) {
      lat.interior_pos_[node] = static_cast<long>(lat.interior_.size());
      lat.interior_.push_back(node);
    }
  }
  if (lat.interior_.empty()) {
    throw validation_error("build_lattice: resolution too coarse, no interior node");
  }

  lat.links_.resize(lat.interior_.size() * n * 2);
  lat.boundary_adjacent_.assign(lat.interior_.size(), 0);
  for (std::size_t pos = 0; pos < lat.interior_.size(); ++pos) {
    const std::size_t node = lat.interior_[pos];
    const Point x = lat.coord(node);
    for (int axis = 0; axis < n; ++axis) {
      for (int side : {-1, 1}) {
        Link& link = lat.links_[(pos * n + axis) * 2 + (side > 0 ? 1 : 0)];
        const long nb = lat.offset(node, axis, side);
        if (nb >= 0 && lat.classes_[nb] != NodeClass::exterior) {
          link = Link{static_cast<std::size_t>(nb), 1.0};
        } else {
          // Box neighbours are always lattice nodes; only balls get here.
          double rest = 0.0;
          for (int j = 0; j < n; ++j) {
            if (j != axis) rest += squared(x[j] - spec.center[j]);
          }
          const double reach = std::sqrt(std::max(0.0, squared(spec.radius) - rest));
          const double offset_from_center = x[axis] - spec.center[axis];
          double theta = (reach - side * offset_from_center) / h;
          theta = std::clamp(theta, 1e-300, 1.0);
          Point hit = x;
          hit[axis] = spec.center[axis] + side * reach;
          link = Link{total + lat.boundary_points_.size(), theta};
          lat.boundary_points_.push_back(hit);
        }
        if (lat.is_dirichlet(link.ref)) lat.boundary_adjacent_[pos] = 1;
      }
    }
  }

  for (std::size_t node = 0; node < total; ++node) {
    if (lat.classes_[node] == NodeClass::boundary) lat.boundary_refs_.push_back(node);
    if (lat.classes_[node] != NodeClass::exterior) lat.closure_refs_.push_back(node);
  }
  for (std::size_t k = 0; k < lat.boundary_points_.size(); ++k) {
    lat.boundary_refs_.push_back(total + k);
    lat.closure_refs_.push_back(total + k);
  }
  return lat;
}

Point Lattice::coord(std::size_t ref) const {
  if (ref >= node_count()) return boundary_points_[ref - node_count()];
  const auto idx = multi_index(ref);
  Point x{};
  for (int i = 0; i < spec_.n; ++i) x[i] = origin_[i] + idx[i] * spec_.h;
  return x;
}

std::array<int, 4> Lattice::multi_index(std::size_t node) const {
  std::array<int, 4> idx{0, 0, 0, 0};
  for (int i = 0; i < spec_.n; ++i) {
    idx[i] = static_cast<int>(node / stride_[i]);
    node %= stride_[i];
  }
  return idx;
}

long Lattice::offset(std::size_t node, int axis, int step) const {
  const int k = static_cast<int>((node / stride_[axis]) % shape_[axis]) + step;
  if (k < 0 || k >= shape_[axis]) return -1;
  return static_cast<long>(node) + static_cast<long>(step) * static_cast<long>(stride_[axis]);
}

long Lattice::offset2(std::size_t node, int axis_a, int step_a, int axis_b,
                      int step_b) const {
  const long first = offset(node, axis_a, step_a);
  if (first < 0) return -1;
  return offset(static_cast<std::size_t>(first), axis_b, step_b);
}

}  // namespace mcf
