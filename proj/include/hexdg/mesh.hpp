#pragma once

// Axi-parallel hexahedral meshes with sigma-geometric refinement towards
// corners and edges, plus extraction of the set of smallest faces.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hexdg {

using Point = std::array<double, 3>;

/// Axis-aligned box [lo, hi].
struct Box3 {
    Point lo{0.0, 0.0, 0.0};
    Point hi{1.0, 1.0, 1.0};

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const { return extent(0) * extent(1) * extent(2); }
    double diameter() const;
    Point center() const;
    bool contains(const Point& x, double tol = 0.0) const;
};

Box3 unit_cube();

enum class PatchKind { Uniform, Edge, Corner, CornerEdge, CornerAllEdges, Fichera };

std::string_view to_string(PatchKind kind);
/// Accepts "uniform", "edge", "corner", "corner-edge", "corner-all-edges",
/// "fichera" (underscores and CamelCase spellings are also accepted).
PatchKind parse_patch_kind(std::string_view name);

struct Element {
    Box3 box;
    int depth = 0; ///< refinement level at which this element was created
};

struct GeometricMesh {
    PatchKind kind = PatchKind::Uniform;
    double sigma = 0.5;
    int levels = 0;
    std::vector<Element> elements;
    std::vector<Box3> macro; ///< macro cells whose union is the domain

    std::size_t size() const { return elements.size(); }
    const Box3& box(std::size_t e) const { return elements[e].box; }
    double domain_volume() const;
    Box3 bounding_box() const;
};

/// Builds the canonical patch on the unit cube (singular edge x=y=0, corner at
/// the origin) or, for Fichera, on (-1,1)^3 minus [0,1)^3.
GeometricMesh build_patch_mesh(PatchKind kind, double sigma, int levels);

/// Mesh from an explicit list of boxes (one macro cell per box, no refinement).
GeometricMesh mesh_from_boxes(std::vector<Box3> boxes);

/// Unit cube split into 8 octants, each refined towards its cube corner and
/// the three incident cube edges: every corner and edge of the cube is refined.
GeometricMesh build_skeleton_mesh(double sigma, int levels);

enum class FaceKind { Interior, Boundary };

/// A smallest face: planar rectangle orthogonal to `axis` at `plane`.
/// For interior faces owners[0] is on the negative side of the axis (its
/// outward normal is +e_axis) and owners[1] on the positive side. For boundary
/// faces owners[1] is unused and `normal_sign` is the sign of the outward
/// normal of the domain along `axis`.
struct Face {
    int axis = 0;
    double plane = 0.0;
    std::array<double, 2> lo{}; ///< extent along the two tangential axes,
    std::array<double, 2> hi{}; ///< ordered as (axis+1)%3, (axis+2)%3
    FaceKind kind = FaceKind::Boundary;
    std::array<std::size_t, 2> owners{0, 0};
    int normal_sign = 1;
    double hperp = 0.0;

    double area() const { return (hi[0] - lo[0]) * (hi[1] - lo[1]); }
    bool interior() const { return kind == FaceKind::Interior; }
    std::array<int, 2> tangential_axes() const { return {(axis + 1) % 3, (axis + 2) % 3}; }
};

struct FaceSet {
    std::vector<Face> faces;
    std::size_t interior_count() const;
    std::size_t boundary_count() const;
};

/// Enumerates all smallest faces with hanging-node resolution. Facet parts
/// not covered by a neighbour become boundary faces. Throws InvariantError
/// when a facet is covered more than once (overlapping elements).
FaceSet extract_faces(const GeometricMesh& mesh);

/// Extent of `element` along the face normal. Throws InvariantError when the
/// face does not lie on the element boundary.
double perp_diameter(const Box3& element, const Face& face);

/// Relative coordinate tolerance used for plane matching.
double geometric_tolerance(const GeometricMesh& mesh);

} // namespace hexdg
