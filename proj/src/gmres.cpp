#include "hexdg/kernels.hpp"
#include "hexdg/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

namespace hexdg {

std::string_view to_string(Preconditioner p) { return p == Preconditioner::ILU0 ? "ilu0" : "none"; }

Preconditioner parse_preconditioner(std::string_view s)
{
    if (s == "ilu0" || s == "ilu" || s == "ILU0")
        return Preconditioner::ILU0;
    if (s == "none")
        return Preconditioner::None;
    throw ConfigError("unknown preconditioner '" + std::string(s) + "' (expected ilu0|none)");
}

void SolveConfig::validate() const
{
    if (!(tol > 0.0))
        throw ConfigError("solver tolerance must be positive");
    if (max_iter < 1 || restart < 1)
        throw ConfigError("max_iter and restart must be positive");
}

Ilu0::Ilu0(const CsrMatrix& a)
    : lu_(a)
{
    if (a.rows != a.cols)
        throw ConfigError("ILU(0) needs a square matrix");
    const std::size_t n = a.rows;
    diag_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto p = lu_.row_ptr[i]; p < lu_.row_ptr[i + 1]; ++p) {
            if (static_cast<std::size_t>(lu_.col[p]) == i)
                diag_[i] = p;
        }
        if (diag_[i] < 0)
            throw SolverError("ILU(0): missing diagonal entry in row " + std::to_string(i));
    }
    std::vector<std::int64_t> pos(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto rb = lu_.row_ptr[i];
        const auto re = lu_.row_ptr[i + 1];
        for (auto p = rb; p < re; ++p)
            pos[lu_.col[p]] = p;
        for (auto p = rb; p < re && static_cast<std::size_t>(lu_.col[p]) < i; ++p) {
            const std::size_t k = lu_.col[p];
            const double piv = lu_.val[diag_[k]];
            const double lik = lu_.val[p] / piv;
            lu_.val[p] = lik;
            if (lik == 0.0)
                continue;
            for (auto q = diag_[k] + 1; q < lu_.row_ptr[k + 1]; ++q) {
                const auto t = pos[lu_.col[q]];
                if (t >= 0)
                    lu_.val[t] -= lik * lu_.val[q];
            }
        }
        for (auto p = rb; p < re; ++p)
            pos[lu_.col[p]] = -1;
        const double d = lu_.val[diag_[i]];
        if (d == 0.0 || !std::isfinite(d))
            throw SolverError("ILU(0): zero pivot in row " + std::to_string(i));
    }
}

void Ilu0::apply(std::span<const double> in, std::span<double> out) const
{
    const std::size_t n = lu_.rows;
    for (std::size_t i = 0; i < n; ++i) {
        double s = in[i];
        for (auto p = lu_.row_ptr[i]; p < diag_[i]; ++p)
            s -= lu_.val[p] * out[lu_.col[p]];
        out[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = out[i];
        for (auto p = diag_[i] + 1; p < lu_.row_ptr[i + 1]; ++p)
            s -= lu_.val[p] * out[lu_.col[p]];
        out[i] = s / lu_.val[diag_[i]];
    }
}

double residual_norm(const CsrMatrix& a, std::span<const double> x, std::span<const double> b)
{
    std::vector<double> r = a.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = b[i] - r[i];
    return kernels::norm2(r);
}

SolveResult gmres_solve(const CsrMatrix& a, std::span<const double> b, const SolveConfig& cfg)
{
    using clock = std::chrono::steady_clock;
    cfg.validate();
    if (a.rows != a.cols || b.size() != a.rows)
        throw ConfigError("GMRES: dimension mismatch");
    const auto& K = kernels::active();
    const std::size_t n = a.rows;
    SolveResult res;
    SolveReport& rep = res.report;
    res.x.assign(n, 0.0);

    const auto t0 = clock::now();
    std::optional<Ilu0> ilu;
    if (cfg.preconditioner == Preconditioner::ILU0) {
        try {
            ilu.emplace(a);
            rep.used = Preconditioner::ILU0;
        } catch (const SolverError&) {
            rep.ilu_fallback = true;
        }
    }
    const auto t1 = clock::now();
    rep.setup_seconds = std::chrono::duration<double>(t1 - t0).count();
    auto precond = [&](std::span<const double> in, std::span<double> out) {
        if (ilu)
            ilu->apply(in, out);
        else
            std::copy(in.begin(), in.end(), out.begin());
    };

    std::vector<double> r(b.begin(), b.end());
    double beta = K.dot(r.data(), r.data(), n);
    beta = std::sqrt(beta);
    rep.rhs_norm = beta;
    rep.residual = beta;
    std::vector<double> best = res.x;
    double best_res = beta;

    const int m = cfg.restart;
    std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
    std::vector<double> h(static_cast<std::size_t>(m + 1) * m, 0.0); // column-major
    std::vector<double> cs(m), sn(m), g(m + 1), y(m);
    std::vector<double> z(n), w(n), u(n);
    auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(j) * (m + 1) + i]; };

    int stalled = 0;
    while (beta > cfg.tol && rep.iterations < cfg.max_iter) {
        for (std::size_t i = 0; i < n; ++i)
            v[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int j = 0;
        for (; j < m && rep.iterations < cfg.max_iter; ++j) {
            precond(v[j], z);
            a.multiply(z, w);
            // modified Gram-Schmidt, two passes
            for (int i = 0; i <= j; ++i)
                H(i, j) = 0.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    const double hij = K.dot(w.data(), v[i].data(), n);
                    H(i, j) += hij;
                    K.axpy(-hij, v[i].data(), w.data(), n);
                }
            }
            const double hn = std::sqrt(K.dot(w.data(), w.data(), n));
            H(j + 1, j) = hn;
            const bool breakdown = hn <= 1e-300;
            if (!breakdown)
                for (std::size_t i = 0; i < n; ++i)
                    v[j + 1][i] = w[i] / hn;
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const double rr = std::hypot(H(j, j), H(j + 1, j));
            cs[j] = rr == 0.0 ? 1.0 : H(j, j) / rr;
            sn[j] = rr == 0.0 ? 0.0 : H(j + 1, j) / rr;
            H(j, j) = rr;
            H(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++rep.iterations;
            const double est = std::abs(g[j + 1]);
            if (cfg.log != nullptr)
                *cfg.log << "{\"iteration\":" << rep.iterations << ",\"residual\":" << est << "}\n";
            if (est <= cfg.tol || breakdown) {
                ++j;
                break;
            }
        }
        // back substitution on the j x j triangle
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int l = i + 1; l < j; ++l)
                s -= H(i, l) * y[l];
            y[i] = H(i, i) == 0.0 ? 0.0 : s / H(i, i);
        }
        std::fill(u.begin(), u.end(), 0.0);
        for (int i = 0; i < j; ++i)
            K.axpy(y[i], v[i].data(), u.data(), n);
        precond(u, z);
        K.axpy(1.0, z.data(), res.x.data(), n);
        a.multiply(res.x, r);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = b[i] - r[i];
        beta = std::sqrt(K.dot(r.data(), r.data(), n));
        ++rep.restarts;
        if (beta < best_res) {
            stalled = beta < 0.9 * best_res ? 0 : stalled + 1;
            best_res = beta;
            best = res.x;
        } else {
            ++stalled;
        }
        if (stalled >= 5)
            break;
    }
    rep.solve_seconds = std::chrono::duration<double>(clock::now() - t1).count();
    if (best_res < beta) {
        res.x = best;
        beta = best_res;
    }
    rep.residual = beta;
    rep.converged = beta <= cfg.tol;
    if (!rep.converged) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "GMRES did not reach residual %.3g (best %.3g after %d iterations)", cfg.tol,
                      beta, rep.iterations);
        throw GmresError(msg, std::move(res.x), rep);
    }
    return res;
}

} // namespace hexdg
