#include "hexdg/fem.hpp"

#include "hexdg/errors.hpp"

#include <cmath>
#include <numbers>

namespace hexdg {

GaussRule gauss_rule(int n)
{
    if (n < 1 || n > 64)
        throw ConfigError("Gauss rule size must be in [1,64], got " + std::to_string(n));
    GaussRule rule;
    rule.n = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n from the Tricomi initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int m = 2; m <= n; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16)
                break;
        }
        {
            double p0 = 1.0;
            double p1 = x;
            for (int m = 2; m <= n; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes)
    : nodes_(std::move(nodes))
{
    const int n = size();
    denom_.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
            if (m != i)
                denom_[i] *= nodes_[i] - nodes_[m];
        }
    }
}

double LagrangeBasis1D::value(int i, double x) const
{
    double v = 1.0;
    for (int m = 0; m < size(); ++m) {
        if (m != i)
            v *= x - nodes_[m];
    }
    return v / denom_[i];
}

double LagrangeBasis1D::derivative(int i, double x) const
{
    // sum over the dropped factor; stable at the nodes
    double s = 0.0;
    for (int m = 0; m < size(); ++m) {
        if (m == i)
            continue;
        double prod = 1.0;
        for (int l = 0; l < size(); ++l) {
            if (l != i && l != m)
                prod *= x - nodes_[l];
        }
        s += prod;
    }
    return s / denom_[i];
}

void LagrangeBasis1D::evaluate(double x, std::span<double> values, std::span<double> derivatives) const
{
    for (int i = 0; i < size(); ++i) {
        values[i] = value(i, x);
        derivatives[i] = derivative(i, x);
    }
}

TensorBasis::TensorBasis(int degree)
    : degree_(degree)
{
    if (degree < 0)
        throw ConfigError("polynomial degree must be >= 0");
    basis1d_ = LagrangeBasis1D(gauss_rule(degree + 1).nodes);
}

std::size_t TensorBasis::size() const
{
    const std::size_t n = nodes_per_axis();
    return n * n * n;
}

void TensorBasis::values_at(const Point& xi, std::span<double> out) const
{
    const int n = nodes_per_axis();
    double v[3][16];
    double dv[16];
    for (int d = 0; d < 3; ++d)
        basis1d_.evaluate(xi[d], std::span<double>(v[d], n), std::span<double>(dv, n));
    std::size_t b = 0;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out[b++] = v[0][i] * v[1][j] * v[2][l];
}

void TensorBasis::values_and_gradients_at(const Point& xi, std::span<double> values,
                                          std::array<std::span<double>, 3> grads) const
{
    const int n = nodes_per_axis();
    double v[3][16];
    double dv[3][16];
    for (int d = 0; d < 3; ++d)
        basis1d_.evaluate(xi[d], std::span<double>(v[d], n), std::span<double>(dv[d], n));
    std::size_t b = 0;
    for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                values[b] = v[0][i] * v[1][j] * v[2][l];
                grads[0][b] = dv[0][i] * v[1][j] * v[2][l];
                grads[1][b] = v[0][i] * dv[1][j] * v[2][l];
                grads[2][b] = v[0][i] * v[1][j] * dv[2][l];
                ++b;
            }
        }
    }
}

Point to_reference(const Box3& box, const Point& x)
{
    Point xi;
    for (int d = 0; d < 3; ++d)
        xi[d] = 2.0 * (x[d] - box.lo[d]) / box.extent(d) - 1.0;
    return xi;
}

Point to_physical(const Box3& box, const Point& xi)
{
    Point x;
    for (int d = 0; d < 3; ++d)
        x[d] = box.lo[d] + 0.5 * (xi[d] + 1.0) * box.extent(d);
    return x;
}

namespace {

void check_box(const Box3& b)
{
    for (int d = 0; d < 3; ++d) {
        if (!(b.extent(d) > 0.0))
            throw ConfigError("degenerate element");
    }
}

// Fills values/gradients at the given physical points.
void fill_table(const TensorBasis& basis, const Box3& element, EvalTable& t)
{
    if (basis.degree() > 15)
        throw ConfigError("polynomial degree above 15 is not supported");
    t.nb = basis.size();
    t.values.assign(t.nq * t.nb, 0.0);
    for (auto& g : t.grads)
        g.assign(t.nq * t.nb, 0.0);
    const std::array<double, 3> scale{2.0 / element.extent(0), 2.0 / element.extent(1),
                                      2.0 / element.extent(2)};
    for (std::size_t q = 0; q < t.nq; ++q) {
        const Point xi = to_reference(element, t.points[q]);
        const std::size_t off = q * t.nb;
        std::array<std::span<double>, 3> g{std::span<double>(t.grads[0].data() + off, t.nb),
                                           std::span<double>(t.grads[1].data() + off, t.nb),
                                           std::span<double>(t.grads[2].data() + off, t.nb)};
        basis.values_and_gradients_at(xi, std::span<double>(t.values.data() + off, t.nb), g);
        for (int d = 0; d < 3; ++d)
            for (double& v : g[d])
                v *= scale[d];
    }
}

} // namespace

EvalTable eval_basis(const TensorBasis& basis, const Box3& element, const GaussRule& rule)
{
    check_box(element);
    EvalTable t;
    const std::size_t n = rule.n;
    t.nq = n * n * n;
    t.points.resize(t.nq);
    t.weights.resize(t.nq);
    const double jac = element.volume() / 8.0;
    std::size_t q = 0;
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t a = 0; a < n; ++a) {
                t.points[q] = to_physical(element, {rule.nodes[a], rule.nodes[b], rule.nodes[c]});
                t.weights[q] = rule.weights[a] * rule.weights[b] * rule.weights[c] * jac;
                ++q;
            }
        }
    }
    fill_table(basis, element, t);
    return t;
}

void face_quadrature(const Face& face, const GaussRule& rule, std::vector<Point>& points,
                     std::vector<double>& weights)
{
    const std::size_t n = rule.n;
    const auto ax = face.tangential_axes();
    const double h0 = face.hi[0] - face.lo[0];
    const double h1 = face.hi[1] - face.lo[1];
    const double jac = h0 * h1 / 4.0;
    points.resize(n * n);
    weights.resize(n * n);
    std::size_t q = 0;
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) {
            Point x{};
            x[face.axis] = face.plane;
            x[ax[0]] = face.lo[0] + 0.5 * (rule.nodes[a] + 1.0) * h0;
            x[ax[1]] = face.lo[1] + 0.5 * (rule.nodes[b] + 1.0) * h1;
            points[q] = x;
            weights[q] = rule.weights[a] * rule.weights[b] * jac;
            ++q;
        }
    }
}

EvalTable trace_basis(const TensorBasis& basis, const Box3& element, const Face& face,
                      const GaussRule& rule)
{
    check_box(element);
    perp_diameter(element, face); // validates that the face lies on the boundary
    EvalTable t;
    face_quadrature(face, rule, t.points, t.weights);
    t.nq = t.points.size();
    // Snap the normal coordinate onto the element facet exactly.
    const double lo = element.lo[face.axis];
    const double hi = element.hi[face.axis];
    const double snap = std::abs(face.plane - lo) < std::abs(face.plane - hi) ? lo : hi;
    for (Point& p : t.points)
        p[face.axis] = snap;
    fill_table(basis, element, t);
    return t;
}

double evaluate_polynomial(const TensorBasis& basis, const Box3& element,
                           std::span<const double> coeffs, const Point& x,
                           std::array<double, 3>* gradient)
{
    const std::size_t nb = basis.size();
    std::vector<double> vals(nb);
    std::vector<double> g0(nb), g1(nb), g2(nb);
    basis.values_and_gradients_at(to_reference(element, x), vals, {g0, g1, g2});
    double v = 0.0;
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (std::size_t b = 0; b < nb; ++b) {
        v += coeffs[b] * vals[b];
        g[0] += coeffs[b] * g0[b];
        g[1] += coeffs[b] * g1[b];
        g[2] += coeffs[b] * g2[b];
    }
    if (gradient != nullptr) {
        for (int d = 0; d < 3; ++d)
            (*gradient)[d] = g[d] * 2.0 / element.extent(d);
    }
    return v;
}

} // namespace hexdg
