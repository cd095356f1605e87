#pragma once

// Manufactured solutions on the unit cube, one-shot solves of the augmented
// system, DG-norm errors and evaluation of a discrete reference solution.

#include "hexdg/assembly.hpp"
#include "hexdg/mesh.hpp"
#include "hexdg/solver.hpp"
#include "hexdg/spaces.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hexdg {

using Mat3 = std::array<std::array<double, 3>, 3>; ///< grad[i][j] = d u_i / d x_j

enum class SingularSet { None, Edge, Corner, CornerEdge };

struct ExactCase {
    std::string name;
    SingularSet singular = SingularSet::None;
    bool has_exact = true;
    bool allows_incompressible = true; ///< defined at nu = 1/2

    std::function<Vec3(const Point&)> u;            ///< also the Dirichlet data
    std::function<Mat3(const Point&)> grad_u;
    std::function<double(const Point&, double nu)> p;
    std::function<Vec3(const Point&, double nu)> f;  ///< -Lap u + grad p
    /// Distance to the singular set (edge x=y=0, corner 0); +inf if none.
    std::function<double(const Point&)> singular_distance;

    /// Mesh family refined towards the singular set.
    PatchKind patch() const;
    /// Throws ConfigError when nu is outside (0, 1/2] or the case excludes nu.
    void check_nu(double nu) const;
};

/// EdgeSing, CornerSing, CornerEdgeSing, SmoothDivFree, PolyExact, CircularForce.
const std::vector<ExactCase>& catalog();
/// Case-insensitive lookup; throws ConfigError for unknown names.
const ExactCase& find_case(std::string_view name);

/// Analytic forcing; throws ConfigError on the singular set.
Vec3 forcing(const ExactCase& c, double nu, const Point& x);

// ---- discrete solutions ----

/// A DG field (velocity and pressure coefficients) on a mesh.
struct DiscreteField {
    GeometricMesh mesh;
    DofMap dofs;
    std::vector<double> velocity; ///< M
    std::vector<double> pressure; ///< N
};

struct FieldValue {
    Vec3 u{};
    Mat3 grad_u{};
    double p = 0.0;
};

/// Value of the field at x inside element e (no location search).
FieldValue evaluate_in_element(const DiscreteField& field, std::size_t e, const Point& x);

struct Solution {
    DiscreteField field;
    double multiplier = 0.0;     ///< r~
    double pressure_mean = 0.0;  ///< int p_h / |Omega|
    SolveReport report;
    double seconds = 0.0;        ///< assembly + solve
};

struct RunSettings {
    DGConfig dg;
    SolveConfig solve;
};

/// Assembles and solves the augmented system for forcing f and Dirichlet
/// data g. GmresError propagates.
Solution solve_system(const GeometricMesh& mesh, const VectorField& f, const VectorField& g, const RunSettings& s);
/// Catalog case at s.dg.nu.
Solution solve_case(const GeometricMesh& mesh, const ExactCase& c, const RunSettings& s);

struct ErrorResult {
    double dg_error = 0.0;
    double velocity_h_error = 0.0;
    double pressure_l2_error = 0.0;
    std::size_t N = 0; ///< M + N - 1 (velocity plus zero-mean pressure)
    int level = 0;
    int k = 0;
};

/// Reference "exact" data: either a catalog case or a discrete reference.
struct ExactData {
    std::function<FieldValue(const Point&)> eval;
    VectorField g; ///< Dirichlet data
};

ExactData exact_from_case(const ExactCase& c, double nu);

/// DG-norm error with the rule dg.overkill_points(): interior faces penalize
/// jumps of u_h only (the exact field is continuous), boundary faces g - u_h.
ErrorResult dg_error(const DiscreteField& sol, const ExactData& exact, const DGConfig& dg);

/// Point location on a reference mesh: lowest-index element containing x.
class ReferenceSolution {
public:
    explicit ReferenceSolution(DiscreteField field);
    /// Throws ConfigError when x lies outside the mesh.
    FieldValue evaluate(const Point& x) const;
    std::size_t locate(const Point& x) const;
    const DiscreteField& field() const { return field_; }

private:
    DiscreteField field_;
    Box3 bbox_;
    int grid_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
    double tol_ = 0.0;
};

ExactData exact_from_reference(std::shared_ptr<const ReferenceSolution> ref, const VectorField& g);

} // namespace hexdg
