#include "hexdg/mesh.hpp"

#include "hexdg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

namespace hexdg {

double Box3::diameter() const
{
    return std::sqrt(extent(0) * extent(0) + extent(1) * extent(1) + extent(2) * extent(2));
}

Point Box3::center() const
{
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
}

bool Box3::contains(const Point& x, double tol) const
{
    for (int d = 0; d < 3; ++d) {
        if (x[d] < lo[d] - tol || x[d] > hi[d] + tol)
            return false;
    }
    return true;
}

Box3 unit_cube() { return Box3{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}; }

std::string_view to_string(PatchKind kind)
{
    switch (kind) {
    case PatchKind::Uniform: return "uniform";
    case PatchKind::Edge: return "edge";
    case PatchKind::Corner: return "corner";
    case PatchKind::CornerEdge: return "corner-edge";
    case PatchKind::CornerAllEdges: return "corner-all-edges";
    case PatchKind::Fichera: return "fichera";
    }
    return "unknown";
}

PatchKind parse_patch_kind(std::string_view name)
{
    std::string key;
    for (char c : name) {
        if (c == '-' || c == '_' || c == ' ')
            continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "uniform") return PatchKind::Uniform;
    if (key == "edge") return PatchKind::Edge;
    if (key == "corner") return PatchKind::Corner;
    if (key == "corneredge") return PatchKind::CornerEdge;
    if (key == "corneralledges") return PatchKind::CornerAllEdges;
    if (key == "fichera") return PatchKind::Fichera;
    throw ConfigError("unknown patch kind '" + std::string(name) + "'");
}

double GeometricMesh::domain_volume() const
{
    double v = 0.0;
    for (const Box3& b : macro)
        v += b.volume();
    return v;
}

Box3 GeometricMesh::bounding_box() const
{
    Box3 bb = macro.empty() ? elements.front().box : macro.front();
    for (const Box3& b : macro) {
        for (int d = 0; d < 3; ++d) {
            bb.lo[d] = std::min(bb.lo[d], b.lo[d]);
            bb.hi[d] = std::max(bb.hi[d], b.hi[d]);
        }
    }
    return bb;
}

namespace {

// Refinement target inside a cell: a corner (one side per axis) and a set of
// edges through that corner, each given by its direction axis.
struct Target {
    std::array<bool, 3> toward_hi{false, false, false};
    std::array<bool, 3> edge_along{false, false, false};
};

// Split coordinate at ratio sigma measured from the targeted side.
double split_point(const Box3& b, int axis, bool toward_hi, double sigma)
{
    return toward_hi ? b.hi[axis] - sigma * b.extent(axis) : b.lo[axis] + sigma * b.extent(axis);
}

// [near part, far part] of the box along one axis.
std::array<std::pair<double, double>, 2> halves(const Box3& b, int axis, bool toward_hi, double sigma)
{
    const double s = split_point(b, axis, toward_hi, sigma);
    if (toward_hi)
        return {std::pair{s, b.hi[axis]}, std::pair{b.lo[axis], s}};
    return {std::pair{b.lo[axis], s}, std::pair{s, b.hi[axis]}};
}

void push(std::vector<Element>& out, const Box3& b, int depth) { out.push_back(Element{b, depth}); }

// Anisotropic refinement towards an edge running along `axis`: the
// cross-section is split into 4 and the edge-adjacent cell recurses.
void refine_edge(const Box3& cell, int axis, const std::array<bool, 3>& toward_hi, double sigma,
                 int levels, int depth, std::vector<Element>& out)
{
    if (levels == 0) {
        push(out, cell, depth);
        return;
    }
    const int a = (axis + 1) % 3;
    const int b = (axis + 2) % 3;
    const auto ha = halves(cell, a, toward_hi[a], sigma);
    const auto hb = halves(cell, b, toward_hi[b], sigma);
    // near/near first so it recurses; ordering of the rest is deterministic
    for (int ia = 0; ia < 2; ++ia) {
        for (int ib = 0; ib < 2; ++ib) {
            Box3 child = cell;
            child.lo[a] = ha[ia].first;
            child.hi[a] = ha[ia].second;
            child.lo[b] = hb[ib].first;
            child.hi[b] = hb[ib].second;
            if (ia == 0 && ib == 0)
                refine_edge(child, axis, toward_hi, sigma, levels - 1, depth + 1, out);
            else
                push(out, child, depth + 1);
        }
    }
}

// Isotropic refinement towards a corner with optional refinement of the
// edges emanating from it. With no edges this is the corner patch, with
// one edge the corner-edge patch.
void refine_corner(const Box3& cell, const Target& target, double sigma, int levels, int depth,
                   std::vector<Element>& out)
{
    if (levels == 0) {
        push(out, cell, depth);
        return;
    }
    std::array<std::array<std::pair<double, double>, 2>, 3> h{};
    for (int d = 0; d < 3; ++d)
        h[d] = halves(cell, d, target.toward_hi[d], sigma);
    for (int iz = 0; iz < 2; ++iz) {
        for (int iy = 0; iy < 2; ++iy) {
            for (int ix = 0; ix < 2; ++ix) {
                const std::array<int, 3> far{ix, iy, iz};
                Box3 child;
                for (int d = 0; d < 3; ++d) {
                    child.lo[d] = h[d][far[d]].first;
                    child.hi[d] = h[d][far[d]].second;
                }
                const int n_far = ix + iy + iz;
                if (n_far == 0) {
                    refine_corner(child, target, sigma, levels - 1, depth + 1, out);
                    continue;
                }
                if (n_far == 1) {
                    const int along = ix == 1 ? 0 : (iy == 1 ? 1 : 2);
                    if (target.edge_along[along]) {
                        refine_edge(child, along, target.toward_hi, sigma, levels - 1, depth + 1, out);
                        continue;
                    }
                }
                push(out, child, depth + 1);
            }
        }
    }
}

void refine_uniform(const Box3& cell, int levels, int depth, std::vector<Element>& out)
{
    if (levels == 0) {
        push(out, cell, depth);
        return;
    }
    const Point c = cell.center();
    for (int iz = 0; iz < 2; ++iz) {
        for (int iy = 0; iy < 2; ++iy) {
            for (int ix = 0; ix < 2; ++ix) {
                const std::array<int, 3> upper{ix, iy, iz};
                Box3 child;
                for (int d = 0; d < 3; ++d) {
                    child.lo[d] = upper[d] ? c[d] : cell.lo[d];
                    child.hi[d] = upper[d] ? cell.hi[d] : c[d];
                }
                refine_uniform(child, levels - 1, depth + 1, out);
            }
        }
    }
}

void check_sigma(double sigma)
{
    if (!(sigma > 0.0 && sigma < 1.0))
        throw ConfigError("refinement ratio sigma must lie in (0,1), got " + std::to_string(sigma));
}

} // namespace

GeometricMesh build_patch_mesh(PatchKind kind, double sigma, int levels)
{
    check_sigma(sigma);
    if (levels < 0)
        throw ConfigError("refinement levels must be >= 0");

    GeometricMesh mesh;
    mesh.kind = kind;
    mesh.sigma = sigma;
    mesh.levels = levels;
    const Box3 cube = unit_cube();

    switch (kind) {
    case PatchKind::Uniform:
        mesh.macro = {cube};
        refine_uniform(cube, levels, 0, mesh.elements);
        break;
    case PatchKind::Edge:
        mesh.macro = {cube};
        refine_edge(cube, 2, {false, false, false}, sigma, levels, 0, mesh.elements);
        break;
    case PatchKind::Corner:
        mesh.macro = {cube};
        refine_corner(cube, Target{}, sigma, levels, 0, mesh.elements);
        break;
    case PatchKind::CornerEdge: {
        mesh.macro = {cube};
        Target t;
        t.edge_along = {false, false, true};
        refine_corner(cube, t, sigma, levels, 0, mesh.elements);
        break;
    }
    case PatchKind::CornerAllEdges: {
        mesh.macro = {cube};
        Target t;
        t.edge_along = {true, true, true};
        refine_corner(cube, t, sigma, levels, 0, mesh.elements);
        break;
    }
    case PatchKind::Fichera: {
        // Seven unit cubes; the reentrant corner is the origin and the
        // reentrant edges are the positive half-axes.
        for (int iz = 0; iz < 2; ++iz) {
            for (int iy = 0; iy < 2; ++iy) {
                for (int ix = 0; ix < 2; ++ix) {
                    const std::array<int, 3> pos{ix, iy, iz};
                    if (ix + iy + iz == 3)
                        continue;
                    Box3 cell;
                    Target t;
                    for (int d = 0; d < 3; ++d) {
                        cell.lo[d] = pos[d] ? 0.0 : -1.0;
                        cell.hi[d] = pos[d] ? 1.0 : 0.0;
                        t.toward_hi[d] = pos[d] == 0;
                        t.edge_along[d] = pos[d] == 1;
                    }
                    mesh.macro.push_back(cell);
                    refine_corner(cell, t, sigma, levels, 0, mesh.elements);
                }
            }
        }
        break;
    }
    }
    return mesh;
}

GeometricMesh mesh_from_boxes(std::vector<Box3> boxes)
{
    GeometricMesh mesh;
    mesh.kind = PatchKind::Uniform;
    mesh.levels = 0;
    for (const Box3& b : boxes) {
        for (int d = 0; d < 3; ++d) {
            if (!(b.hi[d] > b.lo[d]))
                throw ConfigError("degenerate box in mesh");
        }
        mesh.elements.push_back(Element{b, 0});
    }
    mesh.macro = std::move(boxes);
    return mesh;
}

GeometricMesh build_skeleton_mesh(double sigma, int levels)
{
    check_sigma(sigma);
    GeometricMesh mesh;
    mesh.kind = PatchKind::CornerAllEdges;
    mesh.sigma = sigma;
    mesh.levels = levels;
    mesh.macro = {unit_cube()};
    for (int iz = 0; iz < 2; ++iz) {
        for (int iy = 0; iy < 2; ++iy) {
            for (int ix = 0; ix < 2; ++ix) {
                const std::array<int, 3> upper{ix, iy, iz};
                Box3 octant;
                Target t;
                for (int d = 0; d < 3; ++d) {
                    octant.lo[d] = upper[d] ? 0.5 : 0.0;
                    octant.hi[d] = upper[d] ? 1.0 : 0.5;
                    t.toward_hi[d] = upper[d] == 1;
                    t.edge_along[d] = true;
                }
                if (levels == 0)
                    continue;
                refine_corner(octant, t, sigma, levels - 1, 1, mesh.elements);
            }
        }
    }
    if (levels == 0)
        mesh.elements.push_back(Element{unit_cube(), 0});
    return mesh;
}

double geometric_tolerance(const GeometricMesh& mesh)
{
    return 1e-12 * mesh.bounding_box().diameter();
}

std::size_t FaceSet::interior_count() const
{
    return static_cast<std::size_t>(std::count_if(faces.begin(), faces.end(), [](const Face& f) { return f.interior(); }));
}

std::size_t FaceSet::boundary_count() const { return faces.size() - interior_count(); }

namespace {

struct FacetRef {
    std::size_t element;
    bool hi_side; ///< facet at box.hi[axis]
};

// Subtract a set of rectangles from a rectangle; returns the leftover pieces
// as a list of rectangles built from the induced coordinate grid.
std::vector<std::array<double, 4>> uncovered_pieces(const std::array<double, 4>& rect,
                                                    const std::vector<std::array<double, 4>>& covers,
                                                    double tol)
{
    std::vector<double> xs{rect[0], rect[2]};
    std::vector<double> ys{rect[1], rect[3]};
    for (const auto& c : covers) {
        xs.push_back(c[0]);
        xs.push_back(c[2]);
        ys.push_back(c[1]);
        ys.push_back(c[3]);
    }
    auto uniq = [tol](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        std::vector<double> u;
        for (double x : v) {
            if (u.empty() || x > u.back() + tol)
                u.push_back(x);
        }
        v = std::move(u);
    };
    uniq(xs);
    uniq(ys);
    std::vector<std::array<double, 4>> pieces;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const double cx = 0.5 * (xs[i] + xs[i + 1]);
            const double cy = 0.5 * (ys[j] + ys[j + 1]);
            if (cx < rect[0] || cx > rect[2] || cy < rect[1] || cy > rect[3])
                continue;
            bool covered = false;
            for (const auto& c : covers) {
                if (cx > c[0] && cx < c[2] && cy > c[1] && cy < c[3]) {
                    covered = true;
                    break;
                }
            }
            if (!covered)
                pieces.push_back({xs[i], ys[j], xs[i + 1], ys[j + 1]});
        }
    }
    return pieces;
}

} // namespace

FaceSet extract_faces(const GeometricMesh& mesh)
{
    const double tol = geometric_tolerance(mesh);
    FaceSet result;
    const std::size_t n = mesh.size();

    // Facets grouped by (axis, plane) so only coplanar facets are compared.
    // Planes are keyed by rounding to the tolerance grid.
    std::map<std::pair<int, long long>, std::vector<FacetRef>> planes;
    auto key = [tol](double x) { return static_cast<long long>(std::llround(x / tol)); };
    for (std::size_t e = 0; e < n; ++e) {
        const Box3& b = mesh.box(e);
        for (int d = 0; d < 3; ++d) {
            planes[{d, key(b.lo[d])}].push_back({e, false});
            planes[{d, key(b.hi[d])}].push_back({e, true});
        }
    }
    // Neighbouring planes may round to adjacent keys; merge lookups.
    auto coplanar = [&](int d, double x) {
        std::vector<FacetRef> out;
        for (long long kk = key(x) - 1; kk <= key(x) + 1; ++kk) {
            auto it = planes.find({d, kk});
            if (it == planes.end())
                continue;
            for (const FacetRef& f : it->second) {
                const Box3& b = mesh.box(f.element);
                const double p = f.hi_side ? b.hi[d] : b.lo[d];
                if (std::abs(p - x) <= tol)
                    out.push_back(f);
            }
        }
        std::sort(out.begin(), out.end(), [](const FacetRef& a, const FacetRef& b) {
            return std::tie(a.element, a.hi_side) < std::tie(b.element, b.hi_side);
        });
        out.erase(std::unique(out.begin(), out.end(),
                              [](const FacetRef& a, const FacetRef& b) {
                                  return a.element == b.element && a.hi_side == b.hi_side;
                              }),
                  out.end());
        return out;
    };

    for (std::size_t e = 0; e < n; ++e) {
        const Box3& b = mesh.box(e);
        for (int d = 0; d < 3; ++d) {
            const int t0 = (d + 1) % 3;
            const int t1 = (d + 2) % 3;
            const std::array<double, 4> rect{b.lo[t0], b.lo[t1], b.hi[t0], b.hi[t1]};
            for (bool hi_side : {false, true}) {
                const double x = hi_side ? b.hi[d] : b.lo[d];
                std::vector<std::array<double, 4>> covers;
                double covered_area = 0.0;
                for (const FacetRef& other : coplanar(d, x)) {
                    if (other.element == e || other.hi_side == hi_side)
                        continue;
                    const Box3& ob = mesh.box(other.element);
                    const double x0 = std::max(rect[0], ob.lo[t0]);
                    const double y0 = std::max(rect[1], ob.lo[t1]);
                    const double x1 = std::min(rect[2], ob.hi[t0]);
                    const double y1 = std::min(rect[3], ob.hi[t1]);
                    if (x1 - x0 <= tol || y1 - y0 <= tol)
                        continue;
                    covers.push_back({x0, y0, x1, y1});
                    covered_area += (x1 - x0) * (y1 - y0);
                    // Each interior face is emitted once, from its negative-side owner.
                    if (hi_side) {
                        Face f;
                        f.axis = d;
                        f.plane = x;
                        f.lo = {x0, y0};
                        f.hi = {x1, y1};
                        f.kind = FaceKind::Interior;
                        f.owners = {e, other.element};
                        f.normal_sign = 1;
                        f.hperp = std::min(b.extent(d), ob.extent(d));
                        result.faces.push_back(f);
                    }
                }
                const double facet_area = (rect[2] - rect[0]) * (rect[3] - rect[1]);
                const double area_tol = 1e-10 * facet_area;
                if (covered_area > facet_area + area_tol)
                    throw_invariant("overlapping elements: facet of element " + std::to_string(e) +
                                    " covered more than once");
                if (covered_area >= facet_area - area_tol)
                    continue;
                // Remaining parts lie on the domain boundary.
                for (const auto& piece : uncovered_pieces(rect, covers, tol)) {
                    Face f;
                    f.axis = d;
                    f.plane = x;
                    f.lo = {piece[0], piece[1]};
                    f.hi = {piece[2], piece[3]};
                    f.kind = FaceKind::Boundary;
                    f.owners = {e, e};
                    f.normal_sign = hi_side ? 1 : -1;
                    f.hperp = b.extent(d);
                    result.faces.push_back(f);
                }
            }
        }
    }
    return result;
}

double perp_diameter(const Box3& element, const Face& face)
{
    const double tol = 1e-12 * element.diameter();
    const int d = face.axis;
    if (std::abs(face.plane - element.lo[d]) > tol && std::abs(face.plane - element.hi[d]) > tol)
        throw_invariant("face is not on the element boundary");
    const auto t = face.tangential_axes();
    for (int i = 0; i < 2; ++i) {
        if (face.lo[i] < element.lo[t[i]] - tol || face.hi[i] > element.hi[t[i]] + tol)
            throw_invariant("face is not on the element boundary");
    }
    return element.extent(d);
}

} // namespace hexdg
