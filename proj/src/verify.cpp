#include "hexdg/assembly.hpp"
#include "hexdg/cli.hpp"
#include "hexdg/fem.hpp"
#include "hexdg/kernels.hpp"
#include "hexdg/problems.hpp"
#include "hexdg/report.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hexdg {

namespace {

VerifyCheck check_simd(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 1031;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    const auto& ref = kernels::scalar_table();
    const double d0 = ref.dot(x.data(), y.data(), n);
    double worst = 0.0;
    std::string tested = "scalar";
    for (const kernels::KernelTable* t : {kernels::avx2_table(), kernels::neon_table()}) {
        if (t == nullptr || !kernels::isa_available(t->isa))
            continue;
        tested += std::string(",") + std::string(kernels::isa_name(t->isa));
        worst = std::max(worst, std::abs(t->dot(x.data(), y.data(), n) - d0));
        const std::size_t nq = 27, na = 8, nb = 27;
        std::vector<double> a(nq * na), w(nq), b(nq * nb), o1(na * nb, 0.0), o2(na * nb, 0.0);
        for (double& v : a) v = u(rng);
        for (double& v : w) v = u(rng);
        for (double& v : b) v = u(rng);
        ref.weighted_gram(nq, na, nb, a.data(), w.data(), b.data(), o1.data());
        t->weighted_gram(nq, na, nb, a.data(), w.data(), b.data(), o2.data());
        for (std::size_t i = 0; i < o1.size(); ++i)
            worst = std::max(worst, std::abs(o1[i] - o2[i]));
    }
    std::ostringstream os;
    os << "variants " << tested << ", max deviation " << worst;
    return {"simd", worst <= 1e-12, os.str()};
}

VerifyCheck check_quadrature()
{
    double worst = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const GaussRule r = gauss_rule(n);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int q = 0; q < n; ++q)
                s += r.weights[q] * std::pow(r.nodes[q], p);
            const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
            worst = std::max(worst, std::abs(s - exact));
        }
    }
    return {"quadrature", worst <= 1e-13, "max monomial error " + format_double(worst)};
}

VerifyCheck check_mesh()
{
    bool ok = build_patch_mesh(PatchKind::Edge, 0.5, 3).size() == 10
        && build_patch_mesh(PatchKind::Corner, 0.5, 3).size() == 22;
    double worst = 0.0;
    for (PatchKind k : {PatchKind::Uniform, PatchKind::Edge, PatchKind::Corner, PatchKind::CornerEdge,
                        PatchKind::CornerAllEdges, PatchKind::Fichera}) {
        const GeometricMesh m = build_patch_mesh(k, 0.5, 3);
        double vol = 0.0, area = 0.0;
        for (const Element& e : m.elements)
            vol += e.box.volume();
        for (const Face& f : extract_faces(m).faces)
            if (!f.interior())
                area += f.area();
        const double want_vol = k == PatchKind::Fichera ? 7.0 : 1.0;
        const double want_area = k == PatchKind::Fichera ? 24.0 : 6.0;
        worst = std::max({worst, std::abs(vol - want_vol), std::abs(area - want_area)});
    }
    ok = ok && worst <= 1e-12;
    return {"mesh", ok, "edge/corner counts 10/22, max volume/area defect " + format_double(worst)};
}

VerifyCheck check_kernel_identity()
{
    double worst = 0.0;
    for (PatchKind k : {PatchKind::Uniform, PatchKind::Edge, PatchKind::Corner, PatchKind::CornerEdge,
                        PatchKind::CornerAllEdges, PatchKind::Fichera}) {
        const GeometricMesh m = build_patch_mesh(k, 0.5, 1);
        DGConfig cfg;
        cfg.k = 2;
        const DofMap d = build_dofmap(m, 2);
        const CsrMatrix b = assemble_B(m, extract_faces(m), d, cfg);
        const std::vector<double> r = b.multiply(constant_pressure(d));
        double mx = 0.0;
        for (double v : r)
            mx = std::max(mx, std::abs(v));
        worst = std::max(worst, mx / b.max_abs());
    }
    return {"kernel", worst <= 1e-12, "max |B 1|/|B|_max " + format_double(worst)};
}

Vec3 fd_forcing(const ExactCase& c, double nu, const Point& x, double h)
{
    Vec3 lap{0.0, 0.0, 0.0};
    Vec3 gp{};
    const Vec3 u0 = c.u(x);
    for (int d = 0; d < 3; ++d) {
        Point xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        const Vec3 up = c.u(xp), um = c.u(xm);
        for (int i = 0; i < 3; ++i)
            lap[i] += (up[i] - 2.0 * u0[i] + um[i]) / (h * h);
        gp[d] = (c.p(xp, nu) - c.p(xm, nu)) / (2.0 * h);
    }
    return {-lap[0] + gp[0], -lap[1] + gp[1], -lap[2] + gp[2]};
}

VerifyCheck check_forcing(std::mt19937_64& rng, int points)
{
    std::uniform_real_distribution<double> u(0.01, 0.99);
    double worst = 0.0;
    for (const ExactCase& c : catalog()) {
        if (!c.has_exact)
            continue;
        for (double nu : {0.125, 0.375, 0.5}) {
            if (nu == 0.5 && !c.allows_incompressible)
                continue;
            int taken = 0;
            while (taken < points) {
                const Point x{u(rng), u(rng), u(rng)};
                if (c.singular_distance(x) < 0.1)
                    continue;
                ++taken;
                const Vec3 f = forcing(c, nu, x);
                const Vec3 g = fd_forcing(c, nu, x, 1e-4);
                const double nf = std::hypot(f[0], f[1], f[2]);
                const double nd = std::hypot(f[0] - g[0], f[1] - g[1], f[2] - g[2]);
                worst = std::max(worst, nd / std::max(nf, 1e-300));
            }
        }
    }
    return {"forcing", worst <= 1e-5, "max relative finite-difference deviation " + format_double(worst)};
}

VerifyCheck check_galerkin()
{
    const ExactCase& c = find_case("PolyExact");
    RunSettings rs;
    rs.dg.k = 2;
    rs.dg.nu = 0.25;
    const GeometricMesh m = build_patch_mesh(PatchKind::Uniform, 0.5, 1);
    const Solution s = solve_case(m, c, rs);
    const ErrorResult e = dg_error(s.field, exact_from_case(c, rs.dg.nu), rs.dg);
    const bool ok = e.dg_error <= 1e-8 && std::abs(s.multiplier) <= 1e-10;
    return {"galerkin", ok, "PolyExact on 8 elements: dg_error " + format_double(e.dg_error) + ", multiplier "
                                + format_double(s.multiplier)};
}

} // namespace

std::vector<VerifyCheck> run_verification(unsigned seed, int points)
{
    std::mt19937_64 rng(seed);
    std::vector<VerifyCheck> out;
    out.push_back(check_simd(rng));
    out.push_back(check_quadrature());
    out.push_back(check_mesh());
    out.push_back(check_kernel_identity());
    out.push_back(check_forcing(rng, points));
    out.push_back(check_galerkin());
    return out;
}

} // namespace hexdg
