#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace ncsim {

/// Real roots of c3*x^3 + c2*x^2 + c1*x + c0 = 0, ascending, near-equal roots
/// collapsed. Degrades gracefully to quadratic/linear when leading terms vanish.
///
/// Closed-form (Cardan) evaluation followed by a couple of Newton polish steps
/// so residuals stay near machine precision even for ill-scaled coefficients.
inline std::vector<double> solve_cubic_real(double c3, double c2, double c1, double c0) {
    std::vector<double> roots;
    double scale = std::max({std::fabs(c3), std::fabs(c2), std::fabs(c1), std::fabs(c0)});
    if (scale == 0.0) return roots;  // identically zero: treat as no isolated roots
    double degen = 1e-14 * scale;

    if (std::fabs(c3) <= degen) {
        if (std::fabs(c2) <= degen) {
            if (std::fabs(c1) <= degen) return roots;
            roots.push_back(-c0 / c1);
        } else {
            double disc = c1 * c1 - 4.0 * c2 * c0;
            if (disc >= 0.0) {
                double sq = std::sqrt(disc);
                // numerically stable quadratic formula
                double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
                double r1 = q / c2;
                roots.push_back(r1);
                if (q != 0.0) roots.push_back(c0 / q);
                else roots.push_back(-c1 / c2 - r1);
            }
        }
    } else {
        // normalized: x^3 + a x^2 + b x + c
        double a = c2 / c3, b = c1 / c3, c = c0 / c3;
        // depressed: t^3 + p t + q, x = t - a/3
        double p = b - a * a / 3.0;
        double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        double shift = -a / 3.0;
        double disc = q * q / 4.0 + p * p * p / 27.0;
        if (disc > 0.0) {
            double sq = std::sqrt(disc);
            double u = std::cbrt(-q / 2.0 + sq);
            double v = std::cbrt(-q / 2.0 - sq);
            roots.push_back(u + v + shift);
        } else if (disc == 0.0) {
            if (q == 0.0 && p == 0.0) {
                roots.push_back(shift);
            } else {
                double u = std::cbrt(-q / 2.0);
                roots.push_back(2.0 * u + shift);
                roots.push_back(-u + shift);
            }
        } else {
            // three distinct real roots (trigonometric form)
            double r = std::sqrt(-p * p * p / 27.0);
            double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
            double m = 2.0 * std::sqrt(-p / 3.0);
            for (int k = 0; k < 3; ++k)
                roots.push_back(m * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift);
        }
    }

    // polish with Newton steps on the original polynomial
    auto eval = [&](double x, double& d) {
        d = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        return ((c3 * x + c2) * x + c1) * x + c0;
    };
    for (double& x : roots) {
        for (int it = 0; it < 3; ++it) {
            double d, f = eval(x, d);
            if (f == 0.0 || std::fabs(d) < 1e-300) break;
            double step = f / d;
            if (!std::isfinite(step)) break;
            x -= step;
        }
    }

    std::sort(roots.begin(), roots.end());
    // collapse near-equal roots (multiplicities)
    std::vector<double> out;
    for (double x : roots) {
        if (out.empty() || std::fabs(x - out.back()) > 1e-9 * std::max(1.0, std::fabs(x)))
            out.push_back(x);
    }
    return out;
}

}  // namespace ncsim
