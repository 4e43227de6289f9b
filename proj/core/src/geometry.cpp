#include "pinndd/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "pinndd/errors.hpp"

namespace pinndd {

Region Region::rectangle(const Rect& r) {
    if (!(r.x0 < r.x1) || !(r.y0 < r.y1))
        throw ConfigError("Region: rectangle requires x0 < x1 and y0 < y1");
    Region reg;
    reg.kind = Kind::Rectangle;
    reg.rect = r;
    return reg;
}

Region Region::disc(const Disc& d) {
    if (!(d.r > 0)) throw ConfigError("Region: disc requires r > 0");
    Region reg;
    reg.kind = Kind::Disc;
    reg.circle = d;
    reg.rect = Rect{d.cx - d.r, d.cx + d.r, d.cy - d.r, d.cy + d.r};
    return reg;
}

Region Region::rect_minus_disc(const Rect& r, const Disc& d) {
    Region reg = rectangle(r);
    if (!(d.r > 0)) throw ConfigError("Region: disc requires r > 0");
    reg.kind = Kind::RectMinusDisc;
    reg.circle = d;
    return reg;
}

bool Region::contains(const Eigen::Vector2d& p) const {
    switch (kind) {
        case Kind::Rectangle:
            return rect.contains(p);
        case Kind::Disc:
            return circle.dist2(p) < circle.r * circle.r;
        case Kind::RectMinusDisc:
            return rect.contains(p) && circle.dist2(p) > circle.r * circle.r;
    }
    return false;
}

Eigen::Vector2d Interface::normal_at(const Eigen::Vector2d& p) const {
    if (kind == Kind::VerticalLine) return {normal_sign, 0.0};
    return Eigen::Vector2d{(p.x() - circle.cx) / circle.r, (p.y() - circle.cy) / circle.r};
}

Decomposition decompose_strips(const Rect& domain, int subdomain_count, double overlap) {
    if (subdomain_count < 1)
        throw ConfigError("decompose_strips: need at least one subdomain");
    if (overlap < 0)
        throw ConfigError("decompose_strips: overlap must be >= 0");
    const double w = domain.width() / subdomain_count;
    if (subdomain_count > 1 && overlap / 2.0 >= w)
        throw ConfigError("decompose_strips: overlap too large, strips degenerate");

    Decomposition d;
    d.domain = domain;
    d.overlap = overlap;
    const double half = overlap / 2.0;
    for (int s = 0; s < subdomain_count; ++s) {
        const double lo = (s == 0) ? domain.x0 : domain.x0 + s * w - half;
        const double hi = (s == subdomain_count - 1) ? domain.x1 : domain.x0 + (s + 1) * w + half;
        d.subdomains.push_back(Region::rectangle(Rect{lo, hi, domain.y0, domain.y1}));
        std::vector<Interface> gammas;
        if (s > 0) {
            Interface g;
            g.kind = Interface::Kind::VerticalLine;
            g.c = lo;
            g.y0 = domain.y0;
            g.y1 = domain.y1;
            g.normal_sign = -1.0;  // toward the left neighbor
            g.owner = s;
            g.neighbor = s - 1;
            gammas.push_back(g);
        }
        if (s < subdomain_count - 1) {
            Interface g;
            g.kind = Interface::Kind::VerticalLine;
            g.c = hi;
            g.y0 = domain.y0;
            g.y1 = domain.y1;
            g.normal_sign = 1.0;  // toward the right neighbor
            g.owner = s;
            g.neighbor = s + 1;
            gammas.push_back(g);
        }
        d.interfaces.push_back(std::move(gammas));
    }
    return d;
}

Decomposition decompose_interface(const Rect& domain, const Disc& circle) {
    const bool inside = circle.cx - circle.r > domain.x0 && circle.cx + circle.r < domain.x1 &&
                        circle.cy - circle.r > domain.y0 && circle.cy + circle.r < domain.y1;
    if (!(circle.r > 0) || !inside)
        throw ConfigError("decompose_interface: circle must lie strictly inside the rectangle");

    Decomposition d;
    d.domain = domain;
    d.overlap = 0.0;
    d.subdomains.push_back(Region::disc(circle));
    d.subdomains.push_back(Region::rect_minus_disc(domain, circle));
    for (int s = 0; s < 2; ++s) {
        Interface g;
        g.kind = Interface::Kind::Circle;
        g.circle = circle;
        g.owner = s;
        g.neighbor = 1 - s;
        d.interfaces.push_back({g});
    }
    return d;
}

PointList sample_interior(const Region& region, std::size_t n, Rng& rng) {
    if (n == 0) throw ConfigError("sample_interior: N must be >= 1");
    PointList pts;
    pts.reserve(n);
    const Rect bb = region.bounding_box();
    constexpr std::size_t kMaxTries = 1000000;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t tries = 0;
        for (;;) {
            Eigen::Vector2d p{rng.uniform(bb.x0, bb.x1), rng.uniform(bb.y0, bb.y1)};
            if (region.kind == Region::Kind::Rectangle || region.contains(p)) {
                pts.push_back(p);
                break;
            }
            if (++tries >= kMaxTries)
                throw ConfigError("sample_interior: rejection sampling stalled (degenerate region)");
        }
    }
    return pts;
}

namespace {

struct EdgeSegment {
    Eigen::Vector2d a, b;
    std::size_t count;
};

std::vector<EdgeSegment> outer_edges(const Decomposition& d, int s, std::size_t per_edge) {
    const Region& reg = d.subdomains[s];
    std::vector<EdgeSegment> segs;
    if (reg.kind == Region::Kind::Disc) return segs;  // no outer boundary

    const Rect& dom = d.domain;
    const Rect& r = reg.rect;
    auto scaled = [&](double len, double full) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                            static_cast<double>(per_edge) * len / full)));
    };
    // Horizontal edges always lie on the global boundary for strip and
    // rect-minus-disc subdomains; vertical edges only when flush with it.
    segs.push_back({{r.x0, dom.y0}, {r.x1, dom.y0}, scaled(r.width(), dom.width())});
    segs.push_back({{r.x0, dom.y1}, {r.x1, dom.y1}, scaled(r.width(), dom.width())});
    if (r.x0 == dom.x0)
        segs.push_back({{dom.x0, r.y0}, {dom.x0, r.y1}, scaled(r.height(), dom.height())});
    if (r.x1 == dom.x1)
        segs.push_back({{dom.x1, r.y0}, {dom.x1, r.y1}, scaled(r.height(), dom.height())});
    return segs;
}

}  // namespace

PointList sample_boundary(const Decomposition& decomp, int subdomain,
                          std::size_t per_edge, Rng& rng) {
    if (per_edge == 0) throw ConfigError("sample_boundary: per_edge must be >= 1");
    PointList pts;
    for (const auto& seg : outer_edges(decomp, subdomain, per_edge))
        for (std::size_t i = 0; i < seg.count; ++i) {
            const double u = rng.uniform(0.0, 1.0);
            pts.push_back(seg.a + u * (seg.b - seg.a));
        }
    return pts;
}

std::pair<PointList, PointList> sample_interface(const Interface& iface,
                                                 std::size_t n, Rng& rng) {
    if (n == 0) throw ConfigError("sample_interface: N must be >= 1");
    PointList pts, normals;
    pts.reserve(n);
    normals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Vector2d p;
        if (iface.kind == Interface::Kind::VerticalLine) {
            p = {iface.c, rng.uniform(iface.y0, iface.y1)};
        } else {
            const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            p = {iface.circle.cx + iface.circle.r * std::cos(phi),
                 iface.circle.cy + iface.circle.r * std::sin(phi)};
        }
        pts.push_back(p);
        normals.push_back(iface.normal_at(p));
    }
    return {pts, normals};
}

PointList test_grid(const Rect& domain, std::size_t n_per_axis) {
    if (n_per_axis < 2) throw ConfigError("test_grid: n_per_axis must be >= 2");
    PointList pts;
    pts.reserve(n_per_axis * n_per_axis);
    const double dx = domain.width() / static_cast<double>(n_per_axis - 1);
    const double dy = domain.height() / static_cast<double>(n_per_axis - 1);
    for (std::size_t j = 0; j < n_per_axis; ++j)
        for (std::size_t i = 0; i < n_per_axis; ++i)
            pts.push_back({domain.x0 + i * dx, domain.y0 + j * dy});
    return pts;
}

void write_collocation_csv(const CollocationSet& colloc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("write_collocation_csv: cannot open " + path);
    out.precision(17);
    out << "set,x,y,nx,ny\n";
    for (const auto& p : colloc.interior)
        out << "interior," << p.x() << ',' << p.y() << ",,\n";
    for (const auto& p : colloc.boundary)
        out << "boundary," << p.x() << ',' << p.y() << ",,\n";
    for (std::size_t k = 0; k < colloc.interface_points.size(); ++k)
        for (std::size_t i = 0; i < colloc.interface_points[k].size(); ++i) {
            const auto& p = colloc.interface_points[k][i];
            const auto& nrm = colloc.interface_normals[k][i];
            out << "interface," << p.x() << ',' << p.y() << ',' << nrm.x() << ',' << nrm.y() << "\n";
        }
}

}  // namespace pinndd
