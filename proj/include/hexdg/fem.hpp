#pragma once

// Gauss-Legendre rules and tensor-product Lagrange bases whose 1-D nodes are
// Gauss points. Tables are quadrature-point major: entry [q * nb + b].

#include "hexdg/mesh.hpp"

#include <array>
#include <span>
#include <vector>

namespace hexdg {

struct GaussRule {
    int n = 0;
    std::vector<double> nodes;   ///< ascending, in (-1,1)
    std::vector<double> weights; ///< positive, sum to 2
};

/// n-point Gauss-Legendre rule on [-1,1], 1 <= n <= 64.
GaussRule gauss_rule(int n);

/// Lagrange polynomials on a set of distinct nodes in [-1,1].
class LagrangeBasis1D {
public:
    LagrangeBasis1D() = default;
    explicit LagrangeBasis1D(std::vector<double> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }

    double value(int i, double x) const;
    double derivative(int i, double x) const;

    /// All values and derivatives at x; spans must have size().
    void evaluate(double x, std::span<double> values, std::span<double> derivatives) const;

private:
    std::vector<double> nodes_;
    std::vector<double> denom_; ///< prod_{m != i} (x_i - x_m)
};

/// Q_p on the reference cube, nodal at the tensor Gauss points of p+1 nodes.
/// Shape function index b = i + (p+1) * (j + (p+1) * l) for 1-D indices
/// (i, j, l) along (x, y, z).
class TensorBasis {
public:
    explicit TensorBasis(int degree);

    /// Velocity space Q_k.
    static TensorBasis velocity(int k) { return TensorBasis(k); }
    /// Pressure space Q_{k-1}.
    static TensorBasis pressure(int k) { return TensorBasis(k - 1); }

    int degree() const { return degree_; }
    int nodes_per_axis() const { return degree_ + 1; }
    std::size_t size() const;
    const LagrangeBasis1D& basis1d() const { return basis1d_; }

    /// Values of all shape functions at a reference point.
    void values_at(const Point& xi, std::span<double> out) const;
    /// Values and reference gradients at a reference point.
    void values_and_gradients_at(const Point& xi, std::span<double> values,
                                 std::array<std::span<double>, 3> grads) const;

private:
    int degree_;
    LagrangeBasis1D basis1d_;
};

/// Physical-space values and gradients of a basis on an element.
struct EvalTable {
    std::size_t nq = 0;
    std::size_t nb = 0;
    std::vector<Point> points;
    std::vector<double> weights;
    std::vector<double> values;               ///< nq x nb
    std::array<std::vector<double>, 3> grads; ///< each nq x nb

    double value(std::size_t q, std::size_t b) const { return values[q * nb + b]; }
    double grad(int d, std::size_t q, std::size_t b) const { return grads[d][q * nb + b]; }
};

/// Reference-to-physical maps for an axi-parallel box.
Point to_reference(const Box3& box, const Point& x);
Point to_physical(const Box3& box, const Point& xi);

/// Volume table with the tensor rule^3 on `element`. Throws ConfigError for
/// degenerate elements.
EvalTable eval_basis(const TensorBasis& basis, const Box3& element, const GaussRule& rule);

/// Trace of the element basis on a (possibly smaller) face: the tensor rule^2
/// on the face rectangle, with full 3-D gradients. Throws InvariantError when
/// the face is not on the element boundary.
EvalTable trace_basis(const TensorBasis& basis, const Box3& element, const Face& face,
                      const GaussRule& rule);

/// Quadrature points and weights of the tensor rule^2 on a face rectangle.
void face_quadrature(const Face& face, const GaussRule& rule, std::vector<Point>& points,
                     std::vector<double>& weights);

/// Value and physical gradient of a polynomial with the given nodal coefficients.
double evaluate_polynomial(const TensorBasis& basis, const Box3& element,
                           std::span<const double> coeffs, const Point& x,
                           std::array<double, 3>* gradient = nullptr);

} // namespace hexdg
