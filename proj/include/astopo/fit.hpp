#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "astopo/random.hpp"

namespace astopo {

/// Left-continuous empirical CCDF: for each distinct value x, the fraction
/// of samples >= x.
struct EmpiricalCCDF {
    std::vector<std::pair<std::int64_t, double>> points;

    /// Fraction of samples >= x for any integer x.
    double at(std::int64_t x) const;
};

EmpiricalCCDF empirical_ccdf(std::span<const std::int64_t> samples);

class DegenerateDistribution : public std::invalid_argument {
public:
    explicit DegenerateDistribution(std::int64_t value)
        : std::invalid_argument("degenerate distribution: every sample equals " +
                                std::to_string(value)),
          value_(value) {}
    std::int64_t value() const { return value_; }

private:
    std::int64_t value_;
};

struct FitOptions {
    /// Extrapolation stops where the ccdf drops below 1 / (epsilon_factor * N).
    double epsilon_factor = 10.0;
    /// The tail slope comes from the last tail_fraction of the distinct
    /// values, or from the values holding the top tail_fraction of the
    /// samples when the count at the end of the data agrees with that line
    /// to within tail_check_z Poisson standard deviations.
    double tail_fraction = 0.1;
    double tail_check_z = 2.0;
    /// Tail slopes shallower than -min_tail_steepness are clamped to it.
    double min_tail_steepness = 0.5;
    /// Upper bound on the fixed degrees of freedom used when GCV has no
    /// interior minimum.
    double max_fallback_edf = 20.0;
    int grid_points = 512;
};

/// Continuous, monotone approximation of a degree CCDF.
///
/// Degree 0 is an atom of mass `zero_mass`. Over degrees >= 1 the ccdf is
/// (1 - zero_mass) * 10^h(log10 x), where h is a monotone piecewise cubic
/// through the knots (log10 degree, log10 of the ccdf conditioned on degree
/// >= 1). Past the last knot h continues linearly with `tail_slope`.
class FittedCCDF {
public:
    FittedCCDF() = default;
    FittedCCDF(double zero_mass, std::vector<double> log_degree, std::vector<double> log_cond_ccdf,
               double tail_slope, std::int64_t support_cap);

    /// All mass on a single degree.
    static FittedCCDF point_mass(std::int64_t value);

    /// P(X >= x) for real x >= 0 (left-continuous at the zero atom).
    double ccdf(double x) const;

    /// Generalized inverse of the CDF, inf{x : F(x) > u} for u in [0, 1),
    /// found by bisection and clamped to the support cap.
    double quantile(double u) const;

    double zero_mass() const { return zero_mass_; }
    double tail_slope() const { return tail_slope_; }
    std::int64_t support_cap() const { return support_cap_; }
    std::span<const double> log_degree() const { return t_; }
    std::span<const double> log_cond_ccdf() const { return h_; }

    /// log10 of the ccdf conditioned on degree >= 1, at t = log10(degree).
    double log_cond(double t) const;

    /// Diagnostics from the smoothing step (zero when not spline-fitted).
    double lambda = 0.0;
    double edf = 0.0;
    bool gcv_bracketed = false;
    double epsilon = 0.0;
    /// Tail slope taken from the end window rather than the upper window.
    bool local_tail = false;

private:
    double zero_mass_ = 0.0;
    std::vector<double> t_;
    std::vector<double> h_;
    std::vector<double> slopes_;
    double tail_slope_ = -1.0;
    std::int64_t support_cap_ = 0;
};

/// Fits the positive part of the left-continuous empirical CCDF in
/// log-log coordinates with a GCV-tuned smoothing spline, projects it onto
/// monotone values, and extends it with a straight tail that ends the
/// support at the degree where the ccdf falls below 1 / (10 N), or at N - 1.
///
/// Throws DegenerateDistribution when all samples are equal, and
/// std::invalid_argument for fewer than 10 samples or negative values.
FittedCCDF fit_ccdf(std::span<const std::int64_t> samples, std::size_t target_size,
                    const FitOptions& options = {});

/// N integer degrees by inverse-CDF sampling with flooring.
///
/// The uniforms are stratified: stratum s (counted from the top of the
/// distribution) receives u = 1 - (s + v_s)/N with v_s the s-th draw of the
/// stream. Runs that share a seed but differ in N therefore place their
/// largest draws at the same relative offsets inside the top strata, and the
/// sample maximum grows with N. The result is shuffled before returning.
std::vector<std::int64_t> sample_degrees(const FittedCCDF& fit, std::size_t count, Rng& rng);

void to_json(nlohmann::json& j, const FittedCCDF& f);
void from_json(const nlohmann::json& j, FittedCCDF& f);

}  // namespace astopo
