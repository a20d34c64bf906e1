#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ncsim {

template <std::size_t N>
struct NewtonResult {
    std::array<double, N> x{};
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

/// Solve A*x = b in place by Gaussian elimination with partial pivoting.
template <std::size_t N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> A,
                                   std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (std::fabs(A[piv][col]) < 1e-300)
            throw std::runtime_error("newton_raphson: singular jacobian");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < N; ++r) {
            double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < N; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < N; ++c) s -= A[i][c] * x[c];
        x[i] = s / A[i][i];
    }
    return x;
}

template <std::size_t N>
double norm2(const std::array<double, N>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

}  // namespace detail

/// Damped Newton-Raphson for a small dense system r(x) = 0.
///
/// Takes full steps while they reduce the residual norm; otherwise halves the
/// step (up to a fixed number of times) before accepting. Returns the best
/// iterate with a convergence flag; callers decide how to treat failures.
template <std::size_t N>
NewtonResult<N> newton_raphson(
    const std::function<std::array<double, N>(const std::array<double, N>&)>& residual,
    const std::function<std::array<std::array<double, N>, N>(const std::array<double, N>&)>& jacobian,
    std::array<double, N> guess, double tol = 1e-12, int max_iter = 100) {
    NewtonResult<N> res;
    res.x = guess;
    std::array<double, N> r = residual(res.x);
    res.residual_norm = detail::norm2<N>(r);

    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        if (res.residual_norm <= tol) {
            res.converged = true;
            return res;
        }
        std::array<double, N> step;
        try {
            step = detail::solve_linear<N>(jacobian(res.x), r);
        } catch (const std::runtime_error&) {
            return res;  // singular jacobian: report best iterate, not converged
        }
        double lambda = 1.0;
        std::array<double, N> xn;
        std::array<double, N> rn;
        double rn_norm = res.residual_norm;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            for (std::size_t i = 0; i < N; ++i) xn[i] = res.x[i] - lambda * step[i];
            rn = residual(xn);
            rn_norm = detail::norm2<N>(rn);
            if (std::isfinite(rn_norm) && rn_norm < res.residual_norm) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return res;  // stagnated: best iterate, not converged
        res.x = xn;
        r = rn;
        res.residual_norm = rn_norm;
    }
    res.converged = res.residual_norm <= tol;
    return res;
}

}  // namespace ncsim
