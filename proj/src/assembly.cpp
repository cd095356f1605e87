#include "hexdg/assembly.hpp"

#include "hexdg/errors.hpp"
#include "hexdg/fem.hpp"
#include "hexdg/kernels.hpp"

#include <cmath>
#include <string>

namespace hexdg {

void DGConfig::validate() const
{
    if (!(theta >= -1.0 && theta <= 1.0))
        throw_config("theta must lie in [-1,1]");
    if (!(gamma > 0.0))
        throw_config("gamma must be positive");
    if (!(nu > 0.0 && nu <= 0.5))
        throw_config("nu must lie in (0, 1/2]");
    if (k < 1)
        throw_config("k must be >= 1");
    if (quad_form < 0 || quad_form > 64 || quad_overkill < 0 || quad_overkill > 64)
        throw_config("quadrature point counts must lie in [0,64]");
}

double penalty(const DGConfig& cfg, const Face& face)
{
    if (!(face.hperp > 0.0))
        throw_invariant("face with non-positive perpendicular diameter");
    return cfg.gamma * cfg.k * cfg.k / face.hperp;
}

namespace {

struct FaceSide {
    std::size_t element;
    double sign;
    EvalTable vel;
    EvalTable pre;
};

// out += G(a, scale*w, b)
void gram(const EvalTable& ta, const std::vector<double>& a, const std::vector<double>& w, double scale,
          const EvalTable& tb, const std::vector<double>& b, double* out, std::vector<double>& scratch)
{
    scratch.resize(w.size());
    for (std::size_t q = 0; q < w.size(); ++q)
        scratch[q] = scale * w[q];
    kernels::active().weighted_gram(w.size(), ta.nb, tb.nb, a.data(), scratch.data(), b.data(), out);
}

void check_inputs(const GeometricMesh& mesh, const DofMap& dofs, const DGConfig& cfg)
{
    cfg.validate();
    if (dofs.elements != mesh.size() || dofs.k != cfg.k)
        throw_config("dof map does not match mesh/config");
}

} // namespace

SystemBlocks assemble_blocks(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs,
                             const DGConfig& cfg, BlockSelection which)
{
    check_inputs(mesh, dofs, cfg);
    const std::size_t ne = mesh.size();
    const std::size_t nv = dofs.vel_scalar;
    const std::size_t np = dofs.pre_element;
    const TensorBasis vbasis = TensorBasis::velocity(cfg.k);
    const TensorBasis pbasis = TensorBasis::pressure(cfg.k);
    const GaussRule rule = gauss_rule(cfg.form_points());
    const auto& K = kernels::active();

    BlockBuilder a(ne, ne, nv, nv);
    BlockBuilder d(ne, ne, nv, nv);
    BlockBuilder b(ne, ne, 3 * nv, np);
    BlockBuilder e(ne, ne, np, np);
    const bool need_b = which.B;
    const bool need_e = which.C || which.E || need_b;

    SystemBlocks out;
    out.dofs = dofs;
    out.m.assign(dofs.N, 0.0);
    out.volume = 0.0;

    std::vector<double> stiff(nv * nv);
    std::vector<double> scratch;
    for (std::size_t el = 0; el < ne; ++el) {
        const Box3& box = mesh.box(el);
        out.volume += box.volume();
        const EvalTable tv = eval_basis(vbasis, box, rule);
        if (which.A || which.D) {
            std::fill(stiff.begin(), stiff.end(), 0.0);
            for (int dd = 0; dd < 3; ++dd)
                K.weighted_gram(tv.nq, nv, nv, tv.grads[dd].data(), tv.weights.data(), tv.grads[dd].data(), stiff.data());
            if (which.A)
                a.add(el, el, stiff.data());
            if (which.D)
                d.add(el, el, stiff.data());
        }
        if (need_e) {
            const EvalTable tp = eval_basis(pbasis, box, rule);
            K.weighted_gram(tp.nq, np, np, tp.values.data(), tp.weights.data(), tp.values.data(), e.block(el, el));
            for (std::size_t q = 0; q < tp.nq; ++q)
                for (std::size_t j = 0; j < np; ++j)
                    out.m[dofs.pressure(el, j)] += tp.weights[q] * tp.value(q, j);
            if (need_b) {
                double* blk = b.block(el, el);
                for (int c = 0; c < 3; ++c)
                    gram(tv, tv.grads[c], tv.weights, -1.0, tp, tp.values, blk + c * nv * np, scratch);
            }
        }
    }

    for (const Face& f : faces.faces) {
        const double c = penalty(cfg, f);
        const int ax = f.axis;
        std::vector<FaceSide> sides;
        if (f.interior()) {
            sides.push_back({f.owners[0], 1.0, {}, {}});
            sides.push_back({f.owners[1], -1.0, {}, {}});
        } else {
            sides.push_back({f.owners[0], static_cast<double>(f.normal_sign), {}, {}});
        }
        for (FaceSide& s : sides) {
            s.vel = trace_basis(vbasis, mesh.box(s.element), f, rule);
            if (need_b)
                s.pre = trace_basis(pbasis, mesh.box(s.element), f, rule);
        }
        const std::vector<double>& w = sides[0].vel.weights;
        if (f.interior()) {
            for (const FaceSide& r : sides) {     // test side
                for (const FaceSide& t : sides) { // trial side
                    const auto& Vr = r.vel.values;
                    const auto& Nr = r.vel.grads[ax];
                    const auto& Vt = t.vel.values;
                    const auto& Nt = t.vel.grads[ax];
                    if (which.A) {
                        double* blk = a.block(r.element, t.element);
                        gram(r.vel, Nr, w, -0.5 * cfg.theta * t.sign, t.vel, Vt, blk, scratch);
                        gram(r.vel, Vr, w, -0.5 * r.sign, t.vel, Nt, blk, scratch);
                        gram(r.vel, Vr, w, c * r.sign * t.sign, t.vel, Vt, blk, scratch);
                    }
                    if (which.D)
                        gram(r.vel, Vr, w, c * r.sign * t.sign, t.vel, Vt, d.block(r.element, t.element), scratch);
                    if (need_b) {
                        double* blk = b.block(r.element, t.element) + ax * nv * np;
                        gram(r.vel, Vr, w, 0.5 * r.sign, t.pre, t.pre.values, blk, scratch);
                    }
                }
            }
        } else {
            const FaceSide& s = sides[0];
            const auto& V = s.vel.values;
            const auto& N = s.vel.grads[ax];
            if (which.A) {
                double* blk = a.block(s.element, s.element);
                gram(s.vel, N, w, -cfg.theta * s.sign, s.vel, V, blk, scratch);
                gram(s.vel, V, w, -s.sign, s.vel, N, blk, scratch);
                gram(s.vel, V, w, c, s.vel, V, blk, scratch);
            }
            if (which.D)
                gram(s.vel, V, w, c, s.vel, V, d.block(s.element, s.element), scratch);
            if (need_b) {
                double* blk = b.block(s.element, s.element) + ax * nv * np;
                gram(s.vel, V, w, s.sign, s.pre, s.pre.values, blk, scratch);
            }
        }
    }

    if (which.A)
        out.A = a.build_replicated(3);
    if (which.D)
        out.D = d.build_replicated(3);
    if (which.B)
        out.B = b.build();
    if (need_e) {
        CsrMatrix em = e.build();
        if (which.C)
            out.C = em.scaled(1.0 - 2.0 * cfg.nu);
        if (which.E)
            out.E = std::move(em);
    }
    return out;
}

CsrMatrix assemble_A(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs, const DGConfig& cfg)
{
    BlockSelection s{true, false, false, false, false};
    return assemble_blocks(mesh, faces, dofs, cfg, s).A;
}

CsrMatrix assemble_B(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs, const DGConfig& cfg)
{
    BlockSelection s{false, true, false, false, false};
    return assemble_blocks(mesh, faces, dofs, cfg, s).B;
}

CsrMatrix assemble_C(const GeometricMesh& mesh, const DofMap& dofs, const DGConfig& cfg)
{
    BlockSelection s{false, false, true, false, false};
    return assemble_blocks(mesh, FaceSet{}, dofs, cfg, s).C;
}

std::pair<CsrMatrix, CsrMatrix> assemble_norm_matrices(const GeometricMesh& mesh, const FaceSet& faces,
                                                       const DofMap& dofs, const DGConfig& cfg)
{
    BlockSelection s{false, false, false, true, true};
    SystemBlocks blk = assemble_blocks(mesh, faces, dofs, cfg, s);
    return {std::move(blk.D), std::move(blk.E)};
}

std::vector<double> assemble_rhs(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs,
                                 const DGConfig& cfg, const VectorField& f, const VectorField& g)
{
    check_inputs(mesh, dofs, cfg);
    const TensorBasis vbasis = TensorBasis::velocity(cfg.k);
    const TensorBasis pbasis = TensorBasis::pressure(cfg.k);
    const GaussRule rule = gauss_rule(cfg.overkill_points());
    const std::size_t nv = dofs.vel_scalar;
    std::vector<double> rhs(dofs.augmented_size(), 0.0);

    for (std::size_t el = 0; el < mesh.size(); ++el) {
        const EvalTable tv = eval_basis(vbasis, mesh.box(el), rule);
        for (std::size_t q = 0; q < tv.nq; ++q) {
            const Vec3 fq = f(tv.points[q]);
            for (int c = 0; c < 3; ++c) {
                const double s = tv.weights[q] * fq[c];
                if (s == 0.0)
                    continue;
                double* r = rhs.data() + dofs.velocity(el, c, 0);
                for (std::size_t i = 0; i < nv; ++i)
                    r[i] += s * tv.value(q, i);
            }
        }
    }

    for (const Face& face : faces.faces) {
        if (face.interior())
            continue;
        const std::size_t el = face.owners[0];
        const double s = face.normal_sign;
        const double c = penalty(cfg, face);
        const EvalTable tv = trace_basis(vbasis, mesh.box(el), face, rule);
        const EvalTable tp = trace_basis(pbasis, mesh.box(el), face, rule);
        for (std::size_t q = 0; q < tv.nq; ++q) {
            const Vec3 gq = g(tv.points[q]);
            const double w = tv.weights[q];
            for (int comp = 0; comp < 3; ++comp) {
                if (gq[comp] == 0.0)
                    continue;
                double* r = rhs.data() + dofs.velocity(el, comp, 0);
                for (std::size_t i = 0; i < nv; ++i)
                    r[i] += w * gq[comp] * (c * tv.value(q, i) - cfg.theta * s * tv.grad(face.axis, q, i));
            }
            const double gn = s * gq[face.axis];
            if (gn != 0.0) {
                double* r = rhs.data() + dofs.M + dofs.pressure(el, 0);
                for (std::size_t j = 0; j < tp.nb; ++j)
                    r[j] -= w * gn * tp.value(q, j);
            }
        }
    }
    return rhs;
}

namespace {

void append_row(CsrMatrix& out, const CsrMatrix& src, std::size_t row, std::size_t col_shift, double scale)
{
    for (auto p = src.row_ptr[row]; p < src.row_ptr[row + 1]; ++p) {
        out.col.push_back(static_cast<std::int32_t>(src.col[p] + col_shift));
        out.val.push_back(scale * src.val[p]);
    }
}

CsrMatrix saddle(const SystemBlocks& blk, bool with_multiplier)
{
    const std::size_t M = blk.dofs.M;
    const std::size_t N = blk.dofs.N;
    if (blk.A.rows != M || blk.B.rows != M || blk.B.cols != N || blk.C.rows != N)
        throw_config("system blocks are incomplete");
    const CsrMatrix bt = blk.B.transpose();
    CsrMatrix out;
    out.rows = out.cols = M + N + (with_multiplier ? 1 : 0);
    out.col.reserve(blk.A.nnz() + 2 * blk.B.nnz() + blk.C.nnz() + 2 * N + 1);
    out.val.reserve(out.col.capacity());
    out.row_ptr.assign(1, 0);
    for (std::size_t i = 0; i < M; ++i) {
        append_row(out, blk.A, i, 0, 1.0);
        append_row(out, blk.B, i, M, 1.0);
        out.row_ptr.push_back(static_cast<std::int64_t>(out.val.size()));
    }
    for (std::size_t j = 0; j < N; ++j) {
        append_row(out, bt, j, 0, -1.0);
        append_row(out, blk.C, j, M, 1.0);
        if (with_multiplier) {
            out.col.push_back(static_cast<std::int32_t>(M + N));
            out.val.push_back(-blk.m[j]);
        }
        out.row_ptr.push_back(static_cast<std::int64_t>(out.val.size()));
    }
    if (with_multiplier) {
        for (std::size_t j = 0; j < N; ++j) {
            out.col.push_back(static_cast<std::int32_t>(M + j));
            out.val.push_back(blk.m[j] / blk.volume);
        }
        out.col.push_back(static_cast<std::int32_t>(M + N));
        out.val.push_back(-1.0);
        out.row_ptr.push_back(static_cast<std::int64_t>(out.val.size()));
    }
    return out;
}

} // namespace

CsrMatrix assemble_augmented(const SystemBlocks& blocks) { return saddle(blocks, true); }

CsrMatrix assemble_saddle(const SystemBlocks& blocks) { return saddle(blocks, false); }

std::vector<double> constant_pressure(const DofMap& dofs) { return std::vector<double>(dofs.N, 1.0); }

namespace {

template <class F>
void for_each_node(const Box3& box, const TensorBasis& basis, F&& fn)
{
    const auto& x = basis.basis1d().nodes();
    const std::size_t n = x.size();
    std::size_t b = 0;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                fn(b++, to_physical(box, {x[i], x[j], x[l]}));
}

} // namespace

std::vector<double> interpolate_velocity(const GeometricMesh& mesh, const DofMap& dofs, const VectorField& u)
{
    std::vector<double> out(dofs.M);
    const TensorBasis basis = TensorBasis::velocity(dofs.k);
    for (std::size_t el = 0; el < mesh.size(); ++el) {
        for_each_node(mesh.box(el), basis, [&](std::size_t b, const Point& x) {
            const Vec3 v = u(x);
            for (int c = 0; c < 3; ++c)
                out[dofs.velocity(el, c, b)] = v[c];
        });
    }
    return out;
}

std::vector<double> interpolate_pressure(const GeometricMesh& mesh, const DofMap& dofs,
                                         const std::function<double(const Point&)>& p)
{
    std::vector<double> out(dofs.N);
    const TensorBasis basis = TensorBasis::pressure(dofs.k);
    for (std::size_t el = 0; el < mesh.size(); ++el)
        for_each_node(mesh.box(el), basis, [&](std::size_t b, const Point& x) { out[dofs.pressure(el, b)] = p(x); });
    return out;
}

} // namespace hexdg
