// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_QUADRATURE_HPP
#define RABWET_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>

namespace rabwet {

// Gauss-Legendre rule on [-1, 1]. Nodes are the roots of P_n found by Newton
// iteration from the Chebyshev-like initial guesses; weights from the
// derivative identity w = 2 / ((1 - x^2) P_n'(x)^2).
template <typename Scalar = double>
struct GaussLegendre {
    Eigen::Vector<Scalar, Eigen::Dynamic> nodes;
    Eigen::Vector<Scalar, Eigen::Dynamic> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        const Scalar pi = Scalar(3.14159265358979323846264338328L);
        for (int i = 0; i < n; ++i) {
            Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
            Scalar dp = 0;
            for (int it = 0; it < 100; ++it) {
                // Legendre recurrence up to degree n, tracking the derivative.
                Scalar p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = Scalar(n) * (x * p1 - p0) / (x * x - 1);
                const Scalar dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < Scalar(1e-16)) break;
            }
            nodes[i] = x;
            weights[i] = 2 / ((1 - x * x) * dp * dp);
        }
    }
};

// Composite Gauss-Legendre integral of f over [a, b] split into `panels`
// equal panels with `order` nodes each.
template <typename Scalar = double, typename F>
Scalar integrate(F&& f, Scalar a, Scalar b, int panels, int order = 20) {
    const GaussLegendre<Scalar> rule(order);
    const Scalar h = (b - a) / Scalar(panels);
    Scalar total = 0;
    for (int p = 0; p < panels; ++p) {
        const Scalar mid = a + (Scalar(p) + Scalar(0.5)) * h;
        Scalar acc = 0;
        for (int i = 0; i < order; ++i)
            acc += rule.weights[i] * f(mid + Scalar(0.5) * h * rule.nodes[i]);
        total += acc * Scalar(0.5) * h;
    }
    return total;
}

}  // namespace rabwet

#endif  // RABWET_QUADRATURE_HPP
