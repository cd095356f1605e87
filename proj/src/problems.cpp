#include "hexdg/problems.hpp"

#include "hexdg/errors.hpp"
#include "hexdg/fem.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace hexdg {

namespace {

constexpr double pi = std::numbers::pi;

// Value, gradient and Hessian of a scalar field at a point.
struct Jet {
    double v = 0.0;
    Vec3 g{};
    Mat3 h{};
};

Jet operator*(const Jet& a, const Jet& b)
{
    Jet r;
    r.v = a.v * b.v;
    for (int i = 0; i < 3; ++i) {
        r.g[i] = a.v * b.g[i] + b.v * a.g[i];
        for (int j = 0; j < 3; ++j)
            r.h[i][j] = a.v * b.h[i][j] + b.v * a.h[i][j] + a.g[i] * b.g[j] + b.g[i] * a.g[j];
    }
    return r;
}

// R^a with R^2 = sum of x_i^2 over the first `dims` coordinates.
Jet radial_power(const Point& x, int dims, double a)
{
    double r2 = 0.0;
    for (int i = 0; i < dims; ++i)
        r2 += x[i] * x[i];
    const double r = std::sqrt(r2);
    Jet j;
    j.v = std::pow(r, a);
    if (r == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i < 3; ++i) {
            j.g[i] = i < dims ? nan : 0.0;
            for (int k = 0; k < 3; ++k)
                j.h[i][k] = (i < dims && k < dims) ? nan : 0.0;
        }
        return j;
    }
    const double ra2 = std::pow(r, a - 2.0);
    const double ra4 = ra2 / r2;
    for (int i = 0; i < dims; ++i) {
        j.g[i] = a * ra2 * x[i];
        for (int k = 0; k < dims; ++k)
            j.h[i][k] = a * (a - 2.0) * ra4 * x[i] * x[k] + (i == k ? a * ra2 : 0.0);
    }
    return j;
}

Jet z_bubble(const Point& x)
{
    Jet j;
    j.v = x[2] * (1.0 - x[2]);
    j.g[2] = 1.0 - 2.0 * x[2];
    j.h[2][2] = -2.0;
    return j;
}

struct Jet1 {
    double v, d, dd;
};

Jet1 sin_sq(double t) { return {std::pow(std::sin(pi * t), 2), pi * std::sin(2 * pi * t), 2 * pi * pi * std::cos(2 * pi * t)}; }
Jet1 sin_cos(double t) { return {0.5 * std::sin(2 * pi * t), pi * std::cos(2 * pi * t), -2 * pi * pi * std::sin(2 * pi * t)}; }

Jet separable(const Jet1& fx, const Jet1& fy, const Jet1& fz, double scale)
{
    const Jet1 f[3] = {fx, fy, fz};
    Jet j;
    j.v = scale * fx.v * fy.v * fz.v;
    for (int i = 0; i < 3; ++i) {
        double g = scale;
        for (int m = 0; m < 3; ++m)
            g *= m == i ? f[m].d : f[m].v;
        j.g[i] = g;
        for (int k = 0; k < 3; ++k) {
            double h = scale;
            for (int m = 0; m < 3; ++m) {
                if (m == i && m == k)
                    h *= f[m].dd;
                else if (m == i || m == k)
                    h *= f[m].d;
                else
                    h *= f[m].v;
            }
            j.h[i][k] = h;
        }
    }
    return j;
}

std::array<Jet, 3> smooth_components(const Point& x)
{
    const Jet1 ax = sin_sq(x[0]), ay = sin_sq(x[1]), az = sin_sq(x[2]);
    const Jet1 bx = sin_cos(x[0]), by = sin_cos(x[1]), bz = sin_cos(x[2]);
    return {separable(ax, by, bz, 1.0), separable(bx, ay, bz, 1.0), separable(bx, by, az, -2.0)};
}

double kappa(double nu) { return 1.0 / (1.0 - 2.0 * nu); }

// u = (0, 0, s) with s a scalar jet; p = -kappa s_z.
ExactCase scalar_case(std::string name, SingularSet set, std::function<Jet(const Point&)> s)
{
    ExactCase c;
    c.name = std::move(name);
    c.singular = set;
    c.allows_incompressible = false;
    c.u = [s](const Point& x) { return Vec3{0.0, 0.0, s(x).v}; };
    c.grad_u = [s](const Point& x) {
        Mat3 g{};
        g[2] = s(x).g;
        return g;
    };
    c.p = [s](const Point& x, double nu) { return -kappa(nu) * s(x).g[2]; };
    c.f = [s](const Point& x, double nu) {
        const Jet j = s(x);
        const double k = kappa(nu);
        return Vec3{-k * j.h[0][2], -k * j.h[1][2], -(j.h[0][0] + j.h[1][1] + j.h[2][2]) - k * j.h[2][2]};
    };
    if (set == SingularSet::Corner)
        c.singular_distance = [](const Point& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
    else
        c.singular_distance = [](const Point& x) { return std::hypot(x[0], x[1]); };
    return c;
}

std::vector<ExactCase> make_catalog()
{
    std::vector<ExactCase> cat;
    cat.push_back(scalar_case("EdgeSing", SingularSet::Edge,
                              [](const Point& x) { return radial_power(x, 2, 0.5) * z_bubble(x); }));
    cat.push_back(scalar_case("CornerSing", SingularSet::Corner,
                              [](const Point& x) { return radial_power(x, 3, 1.0 / 3.0) * z_bubble(x); }));
    cat.push_back(scalar_case("CornerEdgeSing", SingularSet::CornerEdge, [](const Point& x) {
        return radial_power(x, 3, 1.0 / 3.0) * radial_power(x, 2, 0.5) * z_bubble(x);
    }));

    ExactCase smooth;
    smooth.name = "SmoothDivFree";
    smooth.u = [](const Point& x) {
        const auto c = smooth_components(x);
        return Vec3{c[0].v, c[1].v, c[2].v};
    };
    smooth.grad_u = [](const Point& x) {
        const auto c = smooth_components(x);
        return Mat3{c[0].g, c[1].g, c[2].g};
    };
    smooth.p = [](const Point&, double) { return 0.0; };
    smooth.f = [](const Point& x, double) {
        const auto c = smooth_components(x);
        Vec3 f;
        for (int i = 0; i < 3; ++i)
            f[i] = -(c[i].h[0][0] + c[i].h[1][1] + c[i].h[2][2]);
        return f;
    };
    cat.push_back(smooth);

    ExactCase poly;
    poly.name = "PolyExact";
    poly.allows_incompressible = false;
    poly.u = [](const Point& x) { return Vec3{x[0] * x[0] - x[0], 0.0, 0.0}; };
    poly.grad_u = [](const Point& x) {
        Mat3 g{};
        g[0][0] = 2.0 * x[0] - 1.0;
        return g;
    };
    poly.p = [](const Point& x, double nu) { return -(2.0 * x[0] - 1.0) * kappa(nu); };
    poly.f = [](const Point&, double nu) { return Vec3{-2.0 - 2.0 * kappa(nu), 0.0, 0.0}; };
    cat.push_back(poly);

    ExactCase circ;
    circ.name = "CircularForce";
    circ.has_exact = false;
    circ.u = [](const Point&) { return Vec3{0.0, 0.0, 0.0}; }; // Dirichlet data only
    circ.f = [](const Point& x, double) { return Vec3{-x[1] - 0.5, x[0] - 0.5, x[0] - 0.5}; };
    cat.push_back(circ);

    for (ExactCase& c : cat) {
        if (!c.singular_distance)
            c.singular_distance = [](const Point&) { return std::numeric_limits<double>::infinity(); };
    }
    return cat;
}

std::string lower(std::string_view s)
{
    std::string t;
    for (char ch : s)
        if (ch != '-' && ch != '_')
            t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return t;
}

} // namespace

PatchKind ExactCase::patch() const
{
    switch (singular) {
    case SingularSet::Edge:
        return PatchKind::Edge;
    case SingularSet::Corner:
        return PatchKind::Corner;
    case SingularSet::CornerEdge:
        return PatchKind::CornerEdge;
    case SingularSet::None:
        break;
    }
    return PatchKind::Uniform;
}

void ExactCase::check_nu(double nu) const
{
    if (!(nu > 0.0 && nu <= 0.5))
        throw ConfigError("nu must lie in (0, 1/2]");
    if (nu == 0.5 && !allows_incompressible)
        throw ConfigError("case " + name + " is undefined at nu = 1/2: its pressure is -div(u)/(1-2 nu)");
}

const std::vector<ExactCase>& catalog()
{
    static const std::vector<ExactCase> cat = make_catalog();
    return cat;
}

const ExactCase& find_case(std::string_view name)
{
    const std::string key = lower(name);
    for (const ExactCase& c : catalog())
        if (lower(c.name) == key)
            return c;
    std::string names;
    for (const ExactCase& c : catalog())
        names += (names.empty() ? "" : ", ") + c.name;
    throw ConfigError("unknown case '" + std::string(name) + "' (known: " + names + ")");
}

Vec3 forcing(const ExactCase& c, double nu, const Point& x)
{
    c.check_nu(nu);
    if (c.singular_distance(x) == 0.0)
        throw ConfigError("forcing of " + c.name + " evaluated on its singular set");
    return c.f(x, nu);
}

// ---- discrete fields ----

namespace {

struct Bases {
    TensorBasis vel;
    TensorBasis pre;
    explicit Bases(int k) : vel(TensorBasis::velocity(k)), pre(TensorBasis::pressure(k)) {}
};

FieldValue evaluate_with(const Bases& b, const DiscreteField& field, std::size_t e, const Point& x)
{
    const Box3& box = field.mesh.box(e);
    const Point xi = to_reference(box, x);
    const std::size_t nv = b.vel.size();
    std::vector<double> val(nv), g0(nv), g1(nv), g2(nv);
    b.vel.values_and_gradients_at(xi, val, {g0, g1, g2});
    FieldValue out;
    const double sc[3] = {2.0 / box.extent(0), 2.0 / box.extent(1), 2.0 / box.extent(2)};
    for (int c = 0; c < 3; ++c) {
        const double* coef = field.velocity.data() + field.dofs.velocity(e, c, 0);
        double v = 0.0, d0 = 0.0, d1 = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i < nv; ++i) {
            v += coef[i] * val[i];
            d0 += coef[i] * g0[i];
            d1 += coef[i] * g1[i];
            d2 += coef[i] * g2[i];
        }
        out.u[c] = v;
        out.grad_u[c] = {d0 * sc[0], d1 * sc[1], d2 * sc[2]};
    }
    const std::size_t np = b.pre.size();
    std::vector<double> pv(np);
    b.pre.values_at(xi, pv);
    const double* pc = field.pressure.data() + field.dofs.pressure(e, 0);
    for (std::size_t j = 0; j < np; ++j)
        out.p += pc[j] * pv[j];
    return out;
}

} // namespace

FieldValue evaluate_in_element(const DiscreteField& field, std::size_t e, const Point& x)
{
    return evaluate_with(Bases(field.dofs.k), field, e, x);
}

Solution solve_system(const GeometricMesh& mesh, const VectorField& f, const VectorField& g, const RunSettings& s)
{
    const auto t0 = std::chrono::steady_clock::now();
    s.dg.validate();
    const FaceSet faces = extract_faces(mesh);
    const DofMap dofs = build_dofmap(mesh, s.dg.k);
    const SystemBlocks blocks = assemble_blocks(mesh, faces, dofs, s.dg);
    const CsrMatrix aug = assemble_augmented(blocks);
    const std::vector<double> rhs = assemble_rhs(mesh, faces, dofs, s.dg, f, g);
    SolveResult r = gmres_solve(aug, rhs, s.solve);

    Solution sol;
    sol.field.mesh = mesh;
    sol.field.dofs = dofs;
    sol.field.velocity.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(dofs.M));
    sol.field.pressure.assign(r.x.begin() + static_cast<std::ptrdiff_t>(dofs.M),
                              r.x.begin() + static_cast<std::ptrdiff_t>(dofs.M + dofs.N));
    sol.multiplier = r.x[dofs.multiplier()];
    double mean = 0.0;
    for (std::size_t j = 0; j < dofs.N; ++j)
        mean += blocks.m[j] * sol.field.pressure[j];
    sol.pressure_mean = mean / blocks.volume;
    sol.report = r.report;
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

Solution solve_case(const GeometricMesh& mesh, const ExactCase& c, const RunSettings& s)
{
    c.check_nu(s.dg.nu);
    const double nu = s.dg.nu;
    const ExactCase* cp = &c;
    return solve_system(
        mesh, [cp, nu](const Point& x) { return cp->f(x, nu); }, cp->u, s);
}

ExactData exact_from_case(const ExactCase& c, double nu)
{
    if (!c.has_exact)
        throw ConfigError("case " + c.name + " has no exact solution; supply a reference solution");
    c.check_nu(nu);
    const ExactCase* cp = &c;
    ExactData d;
    d.eval = [cp, nu](const Point& x) {
        FieldValue v;
        v.u = cp->u(x);
        v.grad_u = cp->grad_u(x);
        v.p = cp->p(x, nu);
        return v;
    };
    d.g = c.u;
    return d;
}

ErrorResult dg_error(const DiscreteField& sol, const ExactData& exact, const DGConfig& dg)
{
    if (!exact.eval || !exact.g)
        throw ConfigError("dg_error needs exact or reference data");
    if (sol.dofs.k != dg.k)
        throw ConfigError("dg_error: degree mismatch between solution and config");
    const Bases b(dg.k);
    const GaussRule rule = gauss_rule(dg.overkill_points());
    const GeometricMesh& mesh = sol.mesh;
    const std::size_t nv = sol.dofs.vel_scalar;
    double grad2 = 0.0, pre2 = 0.0, jump2 = 0.0;

    auto uh_at = [&](const EvalTable& t, std::size_t e, std::size_t q, Vec3& u, Mat3* g) {
        for (int c = 0; c < 3; ++c) {
            const double* coef = sol.velocity.data() + sol.dofs.velocity(e, c, 0);
            double v = 0.0, d[3] = {0.0, 0.0, 0.0};
            for (std::size_t i = 0; i < nv; ++i) {
                v += coef[i] * t.value(q, i);
                if (g != nullptr)
                    for (int dd = 0; dd < 3; ++dd)
                        d[dd] += coef[i] * t.grad(dd, q, i);
            }
            u[c] = v;
            if (g != nullptr)
                (*g)[c] = {d[0], d[1], d[2]};
        }
    };

    for (std::size_t e = 0; e < mesh.size(); ++e) {
        const EvalTable tv = eval_basis(b.vel, mesh.box(e), rule);
        const EvalTable tp = eval_basis(b.pre, mesh.box(e), rule);
        const double* pc = sol.pressure.data() + sol.dofs.pressure(e, 0);
        for (std::size_t q = 0; q < tv.nq; ++q) {
            const FieldValue ex = exact.eval(tv.points[q]);
            Vec3 u;
            Mat3 g;
            uh_at(tv, e, q, u, &g);
            double s = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    s += std::pow(ex.grad_u[i][j] - g[i][j], 2);
            double ph = 0.0;
            for (std::size_t j = 0; j < tp.nb; ++j)
                ph += pc[j] * tp.value(q, j);
            grad2 += tv.weights[q] * s;
            pre2 += tv.weights[q] * std::pow(ex.p - ph, 2);
        }
    }

    const FaceSet faces = extract_faces(mesh);
    for (const Face& f : faces.faces) {
        const double c = penalty(dg, f);
        const EvalTable t0 = trace_basis(b.vel, mesh.box(f.owners[0]), f, rule);
        if (f.interior()) {
            const EvalTable t1 = trace_basis(b.vel, mesh.box(f.owners[1]), f, rule);
            for (std::size_t q = 0; q < t0.nq; ++q) {
                Vec3 u0, u1;
                uh_at(t0, f.owners[0], q, u0, nullptr);
                uh_at(t1, f.owners[1], q, u1, nullptr);
                double s = 0.0;
                for (int i = 0; i < 3; ++i)
                    s += std::pow(u0[i] - u1[i], 2);
                jump2 += c * t0.weights[q] * s;
            }
        } else {
            for (std::size_t q = 0; q < t0.nq; ++q) {
                Vec3 u0;
                uh_at(t0, f.owners[0], q, u0, nullptr);
                const Vec3 g = exact.g(t0.points[q]);
                double s = 0.0;
                for (int i = 0; i < 3; ++i)
                    s += std::pow(g[i] - u0[i], 2);
                jump2 += c * t0.weights[q] * s;
            }
        }
    }

    ErrorResult r;
    r.velocity_h_error = std::sqrt(grad2 + jump2);
    r.pressure_l2_error = std::sqrt(pre2);
    r.dg_error = std::sqrt(grad2 + jump2 + (2.0 - 2.0 * dg.nu) * pre2);
    r.N = sol.dofs.M + sol.dofs.N - 1;
    r.level = mesh.levels;
    r.k = dg.k;
    return r;
}

ReferenceSolution::ReferenceSolution(DiscreteField field)
    : field_(std::move(field))
{
    const GeometricMesh& mesh = field_.mesh;
    if (mesh.size() == 0)
        throw ConfigError("empty reference mesh");
    bbox_ = mesh.bounding_box();
    tol_ = geometric_tolerance(mesh);
    grid_ = std::clamp(static_cast<int>(2.0 * std::cbrt(static_cast<double>(mesh.size()))), 1, 64);
    buckets_.assign(static_cast<std::size_t>(grid_) * grid_ * grid_, {});
    auto cell = [&](double x, int d) {
        const double t = (x - bbox_.lo[d]) / bbox_.extent(d) * grid_;
        return std::clamp(static_cast<int>(std::floor(t)), 0, grid_ - 1);
    };
    for (std::size_t e = 0; e < mesh.size(); ++e) {
        const Box3& b = mesh.box(e);
        int lo[3], hi[3];
        for (int d = 0; d < 3; ++d) {
            lo[d] = cell(b.lo[d] - tol_, d);
            hi[d] = cell(b.hi[d] + tol_, d);
        }
        for (int k = lo[2]; k <= hi[2]; ++k)
            for (int j = lo[1]; j <= hi[1]; ++j)
                for (int i = lo[0]; i <= hi[0]; ++i)
                    buckets_[(static_cast<std::size_t>(k) * grid_ + j) * grid_ + i].push_back(e);
    }
}

std::size_t ReferenceSolution::locate(const Point& x) const
{
    int idx[3];
    for (int d = 0; d < 3; ++d) {
        const double t = (x[d] - bbox_.lo[d]) / bbox_.extent(d) * grid_;
        idx[d] = std::clamp(static_cast<int>(std::floor(t)), 0, grid_ - 1);
    }
    // Elements are stored in ascending index order, so the first hit is the
    // lowest-index owner. Points on bucket boundaries are covered because
    // elements were registered with the tolerance-widened box.
    for (std::size_t e : buckets_[(static_cast<std::size_t>(idx[2]) * grid_ + idx[1]) * grid_ + idx[0]])
        if (field_.mesh.box(e).contains(x, tol_))
            return e;
    throw ConfigError("point outside the reference mesh");
}

FieldValue ReferenceSolution::evaluate(const Point& x) const
{
    thread_local std::unique_ptr<Bases> cache;
    thread_local int cached_k = -1;
    if (cached_k != field_.dofs.k) {
        cache = std::make_unique<Bases>(field_.dofs.k);
        cached_k = field_.dofs.k;
    }
    return evaluate_with(*cache, field_, locate(x), x);
}

ExactData exact_from_reference(std::shared_ptr<const ReferenceSolution> ref, const VectorField& g)
{
    ExactData d;
    d.eval = [ref](const Point& x) { return ref->evaluate(x); };
    d.g = g;
    return d;
}

} // namespace hexdg
