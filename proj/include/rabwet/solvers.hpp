// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_SOLVERS_HPP
#define RABWET_SOLVERS_HPP

#include "rabwet/power_control.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rabwet {

enum class SolverStatus { Converged, SarInfeasible, NotConverged };

struct LpSolution {
    PowerAllocation alloc;
    double objective = 0.0;      // primal optimum (max-min value xi)
    double dual_objective = 0.0; // matching dual bound
    double duality_gap = 0.0;    // |primal - dual|, absolute
    int pivots = 0;
    bool certified = false;      // dual feasible and gap <= 1e-8 * scale
};

// Dense simplex for
//   maximize xi  s.t.  A p >= xi 1,  1^T p <= budget,  0 <= p <= caps.
//
// Standard-form tableau over x = (p, xi) with rows (xi 1 - A p <= 0),
// (1^T p <= budget) and one row per finite cap. Every right-hand side is
// nonnegative, so the slack basis is feasible and no phase-1 is needed.
// Bland's smallest-index rule keeps the walk finite and deterministic on the
// fully degenerate start. The dual vector is read off the final objective
// row and verified, so the result carries its own optimality certificate.
inline LpSolution solve_lp_maximin(const LpInstance& inst) {
    const int n = static_cast<int>(inst.A.rows());
    const int M = static_cast<int>(inst.A.cols());
    if (n < 1 || !(inst.budget > 0)) throw std::invalid_argument("solve_lp_maximin: bad instance");

    std::vector<int> capped;
    for (int j = 0; j < M; ++j)
        if (std::isfinite(inst.caps[j])) capped.push_back(j);
    const int rows = n + 1 + static_cast<int>(capped.size());
    const int nx = M + 1; // structural variables (p, xi)
    const int cols = nx + rows + 1;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(rows + 1, cols);
    for (int i = 0; i < n; ++i) {
        T.row(i).head(M) = -inst.A.row(i);
        T(i, M) = 1.0; // xi coefficient
    }
    T.row(n).head(M).setOnes();
    T(n, cols - 1) = inst.budget;
    for (std::size_t k = 0; k < capped.size(); ++k) {
        T(n + 1 + static_cast<int>(k), capped[k]) = 1.0;
        T(n + 1 + static_cast<int>(k), cols - 1) = inst.caps[capped[k]];
    }
    for (int i = 0; i < rows; ++i) T(i, nx + i) = 1.0;
    T(rows, M) = -1.0; // maximize xi

    std::vector<int> basis(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = nx + i;

    LpSolution sol;
    const double enter_tol = 1e-11;
    const double pivot_tol = 1e-11;
    for (;;) {
        int enter = -1;
        for (int j = 0; j < cols - 1; ++j)
            if (T(rows, j) < -enter_tol) { enter = j; break; }
        if (enter < 0) break;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < rows; ++i) {
            if (T(i, enter) <= pivot_tol) continue;
            const double ratio = T(i, cols - 1) / T(i, enter);
            if (ratio < best - 1e-15 ||
                (ratio < best + 1e-15 && (leave < 0 || basis[static_cast<std::size_t>(i)] <
                                                           basis[static_cast<std::size_t>(leave)])))
            {
                best = ratio;
                leave = i;
            }
        }
        if (leave < 0) throw std::runtime_error("solve_lp_maximin: unbounded tableau");
        T.row(leave) /= T(leave, enter);
        for (int i = 0; i <= rows; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
        if (++sol.pivots > 50 * (rows + nx))
            throw std::runtime_error("solve_lp_maximin: pivot limit exceeded");
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(nx);
    for (int i = 0; i < rows; ++i)
        if (basis[static_cast<std::size_t>(i)] < nx)
            x[basis[static_cast<std::size_t>(i)]] = T(i, cols - 1);
    sol.alloc.p = x.head(M);
    sol.alloc.budget = inst.budget;
    sol.alloc.achieved_xi = (inst.A * sol.alloc.p).minCoeff();
    sol.objective = x[M];

    // Dual certificate. y is the objective-row coefficient on each slack;
    // dual feasibility needs y >= 0 and G^T y >= c, value is h^T y.
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) y[i] = T(rows, nx + i);
    sol.dual_objective = 0.0;
    sol.dual_objective += y[n] * inst.budget;
    for (std::size_t k = 0; k < capped.size(); ++k)
        sol.dual_objective += y[n + 1 + static_cast<int>(k)] * inst.caps[capped[k]];
    sol.duality_gap = std::abs(sol.objective - sol.dual_objective);
    bool dual_ok = y.minCoeff() > -1e-9;
    // Columns of G: p_j appears in device rows (-A) and budget/cap rows (+1).
    for (int j = 0; j < M && dual_ok; ++j) {
        double lhs = y[n];
        for (int i = 0; i < n; ++i) lhs -= y[i] * inst.A(i, j);
        for (std::size_t k = 0; k < capped.size(); ++k)
            if (capped[k] == j) lhs += y[n + 1 + static_cast<int>(k)];
        if (lhs < -1e-8) dual_ok = false;
    }
    double xi_col = 0.0;
    for (int i = 0; i < n; ++i) xi_col += y[i];
    if (xi_col < 1.0 - 1e-8) dual_ok = false; // c_xi = 1
    const double scale = std::max(1.0, std::abs(sol.objective));
    sol.certified = dual_ok && sol.duality_gap <= 1e-8 * scale;
    return sol;
}

struct CovarianceSolution {
    Eigen::MatrixXcd V;
    double achieved_xi = 0.0; // min_i beta_i h_i^H V h_i, watts
    int newton_iterations = 0;
    SolverStatus status = SolverStatus::Converged;
};

namespace detail {

// Orthonormal Hermitian basis bookkeeping for M x M matrices: the first M
// indices are diagonal units, then for each pair j < k a real-symmetric and
// an imaginary-antisymmetric element, both Frobenius-normalized.
struct HermBasis {
    int M;
    struct OffDiag { int j, k; bool imag; };
    std::vector<OffDiag> off; // index a - M addresses off[a - M]

    explicit HermBasis(int m) : M(m) {
        for (int j = 0; j < M; ++j)
            for (int k = j + 1; k < M; ++k) {
                off.push_back({j, k, false});
                off.push_back({j, k, true});
            }
    }
    int size() const { return M * M; }

    Eigen::MatrixXcd matrix(const Eigen::VectorXd& x) const {
        const double r2 = std::sqrt(0.5);
        Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(M, M);
        for (int a = 0; a < M; ++a) V(a, a) = x[a];
        for (std::size_t q = 0; q < off.size(); ++q) {
            const auto& o = off[q];
            const double v = x[M + static_cast<int>(q)] * r2;
            if (o.imag) {
                V(o.j, o.k) += std::complex<double>(0, -v);
                V(o.k, o.j) += std::complex<double>(0, v);
            } else {
                V(o.j, o.k) += v;
                V(o.k, o.j) += v;
            }
        }
        return V;
    }

    // <E_a, H> for Hermitian H.
    Eigen::VectorXd project(const Eigen::MatrixXcd& H) const {
        const double r2 = std::sqrt(2.0);
        Eigen::VectorXd g(size());
        for (int a = 0; a < M; ++a) g[a] = H(a, a).real();
        for (std::size_t q = 0; q < off.size(); ++q) {
            const auto& o = off[q];
            g[M + static_cast<int>(q)] =
                o.imag ? -r2 * H(o.j, o.k).imag() : r2 * H(o.j, o.k).real();
        }
        return g;
    }

    // Rows of the log-det Hessian: Y_a = W E_a W for each basis element,
    // projected back onto the basis.
    void logdet_hessian(const Eigen::MatrixXcd& W, Eigen::MatrixXd& Hd) const {
        const int m = size();
        const double r2 = std::sqrt(0.5);
        Eigen::MatrixXcd Y(M, M);
        for (int a = 0; a < m; ++a) {
            if (a < M) {
                Y = W.col(a) * W.row(a);
            } else {
                const auto& o = off[static_cast<std::size_t>(a - M)];
                if (o.imag)
                    Y = std::complex<double>(0, -r2) * (W.col(o.j) * W.row(o.k)) +
                        std::complex<double>(0, r2) * (W.col(o.k) * W.row(o.j));
                else
                    Y = r2 * (W.col(o.j) * W.row(o.k)) + r2 * (W.col(o.k) * W.row(o.j));
            }
            Hd.row(a) = project(Y);
        }
    }
};

}  // namespace detail

// Max-min fair transmit covariance:
//   maximize xi  s.t.  beta_i h_i^H V h_i >= xi,  tr(V) <= p_T,  V PSD,
//   and optionally tr(S V) <= delta.
//
// Solved by a primal log-barrier Newton method on the joint (V, xi)
// variables, parametrized over an orthonormal Hermitian basis. V = c*I with
// xi at half the worst device power is strictly feasible for every instance,
// so no phase-1 is needed; the barrier parameter schedule certifies the
// final gap at (M + n + constraints)/t relative to the problem scale. The
// iteration schedule is fixed and input-only, so results are bit
// reproducible. Sized for M <= 8, n <= 64.
inline CovarianceSolution solve_maximin_covariance(
    const std::vector<std::pair<double, Eigen::VectorXcd>>& channels, double p_T,
    const SarModel* sar = nullptr) {
    const int n = static_cast<int>(channels.size());
    if (n < 1 || !(p_T > 0)) throw std::invalid_argument("solve_maximin_covariance: bad instance");
    const int M = static_cast<int>(channels[0].second.size());

    CovarianceSolution out;
    const bool has_sar = sar != nullptr && std::isfinite(sar->delta);
    if (has_sar && sar->delta <= 0) {
        out.V = Eigen::MatrixXcd::Zero(M, M);
        out.achieved_xi = 0.0;
        out.status = SolverStatus::SarInfeasible;
        return out;
    }

    // Rescale so the single-device upper bound is O(1); protects the barrier
    // from the 1e-10-watt magnitudes that device powers take at range.
    double scale = std::numeric_limits<double>::infinity();
    for (const auto& [beta, h] : channels) {
        if (static_cast<int>(h.size()) != M)
            throw std::invalid_argument("solve_maximin_covariance: channel length mismatch");
        scale = std::min(scale, beta * h.squaredNorm() * p_T);
    }
    std::vector<Eigen::MatrixXcd> Hs;
    Hs.reserve(static_cast<std::size_t>(n));
    for (const auto& [beta, h] : channels)
        Hs.push_back((beta / scale) * (h * h.adjoint()));

    const detail::HermBasis basis(M);
    const int m = basis.size();
    Eigen::MatrixXd g(n, m);
    for (int i = 0; i < n; ++i) g.row(i) = basis.project(Hs[static_cast<std::size_t>(i)]);
    Eigen::VectorXd tau = basis.project(Eigen::MatrixXcd::Identity(M, M));
    Eigen::VectorXd sig;
    double delta = 0.0, trS = 0.0;
    if (has_sar) {
        sig = basis.project(sar->S);
        delta = sar->delta;
        trS = sar->S.trace().real();
    }

    double c0 = p_T / (2.0 * M);
    if (has_sar) c0 = std::min(c0, 0.5 * delta / trS);
    Eigen::VectorXd x = tau * c0; // V = c0 * I
    double xi = 0.5 * (g * x).minCoeff();

    const int nu = M + n + 1 + (has_sar ? 1 : 0);
    double t = std::max(1.0, double(nu));
    const double gap_rel = 1e-6;

    struct Slacks {
        Eigen::MatrixXcd V;
        Eigen::VectorXd s;
        double sB, sS, f;
        bool ok;
    };
    auto eval = [&](const Eigen::VectorXd& xv, double xiv, double tv) {
        Slacks sl;
        sl.V = basis.matrix(xv);
        sl.s = g * xv - Eigen::VectorXd::Constant(n, xiv);
        sl.sB = p_T - tau.dot(xv);
        sl.sS = has_sar ? delta - sig.dot(xv) : 1.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sl.V, Eigen::EigenvaluesOnly);
        const auto& w = eig.eigenvalues();
        sl.ok = sl.s.minCoeff() > 0 && sl.sB > 0 && sl.sS > 0 && w.minCoeff() > 0;
        if (!sl.ok) {
            sl.f = std::numeric_limits<double>::infinity();
            return sl;
        }
        sl.f = -tv * xiv - w.array().log().sum() - sl.s.array().log().sum() - std::log(sl.sB);
        if (has_sar) sl.f -= std::log(sl.sS);
        return sl;
    };

    Eigen::MatrixXd Hd(m, m);
    Eigen::MatrixXd K(m + 1, m + 1);
    Eigen::VectorXd grad(m + 1), step;
    out.status = SolverStatus::Converged;
    int outer_guard = 0;
    for (;;) {
        for (int it = 0; it < 80; ++it) {
            const Slacks cur = eval(x, xi, t);
            const Eigen::MatrixXcd W = cur.V.inverse();
            const Eigen::VectorXd inv_s = cur.s.cwiseInverse();

            grad.head(m) = -basis.project(W) - g.transpose() * inv_s + tau / cur.sB;
            if (has_sar) grad.head(m) += sig / cur.sS;
            grad[m] = -t + inv_s.sum();

            basis.logdet_hessian(W, Hd);
            Hd.noalias() += g.transpose() * inv_s.cwiseAbs2().asDiagonal() * g;
            Hd.noalias() += (tau / cur.sB) * (tau / cur.sB).transpose();
            if (has_sar) Hd.noalias() += (sig / cur.sS) * (sig / cur.sS).transpose();
            K.topLeftCorner(m, m) = Hd;
            K.col(m).head(m) = -g.transpose() * inv_s.cwiseAbs2();
            K.row(m).head(m) = K.col(m).head(m).transpose();
            K(m, m) = inv_s.cwiseAbs2().sum();

            step = K.ldlt().solve(-grad);
            const double lam2 = -grad.dot(step);
            if (!(lam2 > 0) || !step.allFinite()) break;

            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                const Slacks nxt = eval(x + alpha * step.head(m), xi + alpha * step[m], t);
                if (nxt.f <= cur.f - 0.25 * alpha * lam2) {
                    x += alpha * step.head(m);
                    xi += alpha * step[m];
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
            ++out.newton_iterations;
            if (lam2 / 2 < 1e-10) break;
        }
        if (double(nu) / t < gap_rel) break;
        t *= 20.0;
        if (++outer_guard > 60) {
            out.status = SolverStatus::NotConverged;
            break;
        }
    }

    out.V = basis.matrix(x); // x parameterizes V in watts; only xi was scaled
    out.achieved_xi = (g * x).minCoeff() * scale;
    return out;
}

}  // namespace rabwet

#endif  // RABWET_SOLVERS_HPP
