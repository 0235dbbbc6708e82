#pragma once

#include <span>
#include <vector>

namespace astopo {

/// Weighted natural cubic smoothing spline.
///
/// Minimizes  sum_i w_i (y_i - g(x_i))^2 + lambda * integral g''(x)^2 dx
/// over natural cubic splines with knots at the (strictly increasing) x_i,
/// using the Reinsch band formulation: the interior second derivatives solve
/// a pentadiagonal system, and the trace of the influence matrix needed by
/// GCV comes from the central band of that system's inverse.
class SmoothingSpline {
public:
    struct Selection {
        double lambda = 0.0;
        double edf = 0.0;   // trace of the influence matrix
        double gcv = 0.0;
        bool gcv_bracketed = false;
    };

    /// Chooses lambda by generalized cross-validation over a log grid with a
    /// golden-section refinement. If the GCV minimum sits on the edge of the
    /// search range, falls back to the lambda giving `fallback_edf` degrees
    /// of freedom.
    static SmoothingSpline fit_gcv(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> w, double fallback_edf);

    static SmoothingSpline fit_lambda(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> w, double lambda);

    static SmoothingSpline fit_edf(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> w, double edf);

    /// Spline value; linear continuation outside [x_0, x_{n-1}].
    double operator()(double x) const;
    double derivative(double x) const;

    std::span<const double> knots() const { return x_; }
    std::span<const double> fitted() const { return g_; }
    const Selection& selection() const { return sel_; }

private:
    struct Problem;

    std::vector<double> x_;
    std::vector<double> g_;
    std::vector<double> gamma_;  // second derivatives at all knots (0 at the ends)
    Selection sel_;
};

}  // namespace astopo
