// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcf {

using Point = std::array<double, 4>;

enum class DomainKind { box, ball };

/// Convex domain description. Box: per-axis [lower, upper], whose side
/// lengths must be integer multiples of h. Ball: center and radius.
struct DomainSpec {
  DomainKind kind = DomainKind::box;
  int n = 2;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> center;
  double radius = 0.0;
  double h = 0.0;

  /// Throws a validation error describing the first violated invariant.
  void validate() const;

  bool operator==(const DomainSpec&) const = default;
};

double diameter(const DomainSpec& spec);

/// Lebesgue measure of the domain.
double volume(const DomainSpec& spec);

/// Supporting hyperplane of a convex domain at a boundary point p.
/// distance(y) = <normal, y - p> is affine, vanishes at p, has unit
/// gradient and is nonnegative on the closed domain.
struct Hyperplane {
  int n = 0;
  Point origin{};
  Point normal{};  // unit, pointing into the domain

  double distance(const Point& y) const;
};

/// Throws if p is farther than 1e-12·δ from the boundary.
Hyperplane supporting_hyperplane(const DomainSpec& spec, const Point& p);

enum class NodeClass : std::uint8_t { interior, boundary, exterior };

/// Neighbour of an interior node along one axis direction. `ref` is a
/// lattice node index, or node_count() + k for the k-th boundary
/// intersection point. `theta` is the distance to it in units of h; it is 1
/// unless the neighbour is a Shortley–Weller boundary intersection.
struct Link {
  std::size_t ref = 0;
  double theta = 1.0;
};

/// Uniform lattice covering the closed domain. Field values are stored per
/// reference: lattice nodes first (last axis fastest), then the boundary
/// intersection points in creation order. Immutable after construction.
class Lattice {
 public:
  /// Throws if the spec is invalid or no node is interior.
  static Lattice build(const DomainSpec& spec);

  const DomainSpec& spec() const noexcept { return spec_; }
  int n() const noexcept { return spec_.n; }
  double h() const noexcept { return spec_.h; }

  std::size_t node_count() const noexcept { return classes_.size(); }
  std::size_t boundary_point_count() const noexcept { return boundary_points_.size(); }
  /// Number of value slots: nodes plus boundary intersection points.
  std::size_t ref_count() const noexcept { return node_count() + boundary_point_count(); }

  NodeClass node_class(std::size_t node) const { return classes_[node]; }
  bool is_node(std::size_t ref) const noexcept { return ref < node_count(); }
  /// Whether ref carries a value (non-exterior node or boundary point).
  bool in_closure(std::size_t ref) const noexcept {
    return !is_node(ref) || classes_[ref] != NodeClass::exterior;
  }
  bool is_dirichlet(std::size_t ref) const noexcept {
    return !is_node(ref) || classes_[ref] == NodeClass::boundary;
  }

  Point coord(std::size_t ref) const;
  std::array<int, 4> multi_index(std::size_t node) const;
  std::array<int, 4> shape() const noexcept { return shape_; }

  /// Lattice node at multi-index offset from `node`, or -1 when off-grid.
  long offset(std::size_t node, int axis, int step) const;
  long offset2(std::size_t node, int axis_a, int step_a, int axis_b, int step_b) const;

  std::span<const std::size_t> interior() const noexcept { return interior_; }
  /// Position of `node` in interior(), or -1.
  long interior_position(std::size_t node) const { return interior_pos_[node]; }

  const Link& link(std::size_t interior_pos, int axis, int side) const {
    return links_[(interior_pos * spec_.n + axis) * 2 + (side > 0 ? 1 : 0)];
  }
  /// Interior node with at least one Dirichlet axis neighbour.
  bool boundary_adjacent(std::size_t interior_pos) const {
    return boundary_adjacent_[interior_pos] != 0;
  }

  /// Every Dirichlet reference: boundary lattice nodes and intersections.
  std::span<const std::size_t> boundary_refs() const noexcept { return boundary_refs_; }
  /// Every reference in the closed domain, in storage order.
  std::span<const std::size_t> closure_refs() const noexcept { return closure_refs_; }

 private:
  DomainSpec spec_;
  std::array<int, 4> shape_{1, 1, 1, 1};
  std::array<std::size_t, 4> stride_{0, 0, 0, 0};
  Point origin_{};
  std::vector<NodeClass> classes_;
  std::vector<Point> boundary_points_;
  std::vector<std::size_t> interior_;
  std::vector<long> interior_pos_;
  std::vector<Link> links_;
  std::vector<std::uint8_t> boundary_adjacent_;
  std::vector<std::size_t> boundary_refs_;
  std::vector<std::size_t> closure_refs_;
};

}  // namespace mcf
