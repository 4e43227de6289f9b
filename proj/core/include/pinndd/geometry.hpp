#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pinndd/rng.hpp"

namespace pinndd {

using PointList = std::vector<Eigen::Vector2d>;

struct Rect {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(const Eigen::Vector2d& p) const {
        return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
    }
};

struct Disc {
    double cx = 0, cy = 0, r = 1;
    double dist2(const Eigen::Vector2d& p) const {
        const double dx = p.x() - cx, dy = p.y() - cy;
        return dx * dx + dy * dy;
    }
};

/// Subdomain geometry with a deterministic membership predicate.
struct Region {
    enum class Kind { Rectangle, Disc, RectMinusDisc };
    Kind kind = Kind::Rectangle;
    Rect rect;
    Disc circle;

    bool contains(const Eigen::Vector2d& p) const;
    Rect bounding_box() const { return rect; }

    static Region rectangle(const Rect& r);
    static Region disc(const Disc& d);
    static Region rect_minus_disc(const Rect& r, const Disc& d);
};

/// Artificial interface Gamma_s of one subdomain, with unit outward normals
/// and neighbor topology.
struct Interface {
    enum class Kind { VerticalLine, Circle };
    Kind kind = Kind::VerticalLine;
    // VerticalLine: x = c, y in [y0, y1]; normal = (normal_sign, 0),
    // pointing from the owner toward the neighbor.
    double c = 0, y0 = 0, y1 = 1;
    double normal_sign = 1.0;
    // Circle: normal at p is (p - center)/r (outward from the disc side).
    Disc circle;
    int owner = 0;
    int neighbor = 0;

    Eigen::Vector2d normal_at(const Eigen::Vector2d& p) const;
};

struct Decomposition {
    Rect domain;
    std::vector<Region> subdomains;
    std::vector<std::vector<Interface>> interfaces;  // interfaces[s] = Gamma_s
    double overlap = 0.0;

    int count() const { return static_cast<int>(subdomains.size()); }
};

/// Collocation data for one subdomain: interior X_f, outer-boundary X_g and
/// per-interface X_Gamma with unit normals.
struct CollocationSet {
    PointList interior;
    PointList boundary;
    std::vector<PointList> interface_points;   // one list per interface
    std::vector<PointList> interface_normals;  // parallel to interface_points
};

/// S uniform vertical strips with half-overlap delta/2 added on each side of
/// every interior cut. S = 1 yields the whole domain with no interfaces.
Decomposition decompose_strips(const Rect& domain, int subdomain_count, double overlap);

/// Disc interior vs rectangle-minus-disc, sharing one circular interface
/// (zero overlap). The disc subdomain has no outer boundary.
Decomposition decompose_interface(const Rect& domain, const Disc& circle);

/// N i.i.d.-uniform points in the region (rejection sampling off the
/// bounding box for non-rectangular kinds).
PointList sample_interior(const Region& region, std::size_t n, Rng& rng);

/// Uniform points on the subdomain's outer boundary (the part lying on the
/// global boundary). per_edge is the count for a full-length edge of the
/// global rectangle; partial edges get proportional counts. A subdomain
/// with no outer boundary yields an empty list.
PointList sample_boundary(const Decomposition& decomp, int subdomain,
                          std::size_t per_edge, Rng& rng);

/// N points on an interface paired with unit outward normals (uniform in y
/// for lines, uniform in angle for circles).
std::pair<PointList, PointList> sample_interface(const Interface& iface,
                                                 std::size_t n, Rng& rng);

/// n_per_axis x n_per_axis tensor grid, endpoints included.
PointList test_grid(const Rect& domain, std::size_t n_per_axis);

/// CSV dump of a collocation set (columns: set,x,y,nx,ny).
void write_collocation_csv(const CollocationSet& colloc, const std::string& path);

}  // namespace pinndd
