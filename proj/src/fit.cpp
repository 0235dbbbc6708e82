#include "astopo/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "astopo/smoothing_spline.hpp"

namespace astopo {

namespace {

constexpr double kPointMassSlope = -1.0e6;
constexpr std::int64_t kMaxSupportCap = 1'000'000'000'000LL;

// Fritsch-Carlson derivatives for a shape-preserving cubic Hermite
// interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& h) {
    const std::size_t n = t.size();
    std::vector<double> m(n, 0.0);
    if (n < 2)
        return m;
    std::vector<double> dx(n - 1), del(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        dx[k] = t[k + 1] - t[k];
        del[k] = (h[k + 1] - h[k]) / dx[k];
    }
    if (n == 2) {
        m[0] = m[1] = del[0];
        return m;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] * del[k] <= 0.0) {
            m[k] = 0.0;
        } else {
            const double w1 = 2.0 * dx[k] + dx[k - 1];
            const double w2 = dx[k] + 2.0 * dx[k - 1];
            m[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            return 3.0 * d0;
        return s;
    };
    m[0] = edge(dx[0], dx[1], del[0], del[1]);
    m[n - 1] = edge(dx[n - 2], dx[n - 3], del[n - 2], del[n - 3]);
    return m;
}

// Pool-adjacent-violators projection onto non-increasing sequences.
void make_nonincreasing(std::vector<double>& v) {
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (double x : v) {
        blocks.push_back({x, 1});
        while (blocks.size() > 1) {
            const Block& b = blocks.back();
            const Block& a = blocks[blocks.size() - 2];
            if (a.sum / a.count >= b.sum / b.count)
                break;
            Block merged{a.sum + b.sum, a.count + b.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    std::size_t i = 0;
    for (const Block& b : blocks)
        for (std::size_t k = 0; k < b.count; ++k)
            v[i++] = b.sum / b.count;
}

// Weighted least-squares line, as (intercept, slope).
std::pair<double, double> least_squares_line(const std::vector<double>& x, const std::vector<double>& y,
                                             const std::vector<double>& w) {
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    return {my - slope * mx, slope};
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& w) {
    return least_squares_line(x, y, w).second;
}

}  // namespace

double EmpiricalCCDF::at(std::int64_t x) const {
    auto it = std::lower_bound(points.begin(), points.end(), x,
                               [](const auto& p, std::int64_t v) { return p.first < v; });
    return it == points.end() ? 0.0 : it->second;
}

EmpiricalCCDF empirical_ccdf(std::span<const std::int64_t> samples) {
    std::map<std::int64_t, std::size_t> counts;
    for (std::int64_t s : samples)
        ++counts[s];
    EmpiricalCCDF out;
    const double total = static_cast<double>(samples.size());
    std::size_t at_least = samples.size();
    for (const auto& [value, count] : counts) {
        out.points.emplace_back(value, static_cast<double>(at_least) / total);
        at_least -= count;
    }
    return out;
}

FittedCCDF::FittedCCDF(double zero_mass, std::vector<double> log_degree,
                       std::vector<double> log_cond_ccdf, double tail_slope,
                       std::int64_t support_cap)
    : zero_mass_(zero_mass), t_(std::move(log_degree)), h_(std::move(log_cond_ccdf)),
      tail_slope_(tail_slope), support_cap_(support_cap) {
    if (t_.empty() || t_.size() != h_.size())
        throw std::invalid_argument("FittedCCDF: knot arrays must be non-empty and equal length");
    if (!(zero_mass_ >= 0.0 && zero_mass_ <= 1.0))
        throw std::invalid_argument("FittedCCDF: zero mass outside [0, 1]");
    if (!(tail_slope_ < 0.0))
        throw std::invalid_argument("FittedCCDF: tail slope must be negative");
    slopes_ = pchip_slopes(t_, h_);
}

FittedCCDF FittedCCDF::point_mass(std::int64_t value) {
    if (value < 0)
        throw std::invalid_argument("FittedCCDF: negative degree");
    if (value == 0)
        return FittedCCDF(1.0, {0.0}, {0.0}, kPointMassSlope, 0);
    if (value == 1)
        return FittedCCDF(0.0, {0.0}, {0.0}, kPointMassSlope, 1);
    return FittedCCDF(0.0, {0.0, std::log10(static_cast<double>(value))}, {0.0, 0.0},
                      kPointMassSlope, value);
}

double FittedCCDF::log_cond(double t) const {
    if (t <= t_.front())
        return h_.front();
    if (t >= t_.back())
        return h_.back() + tail_slope_ * (t - t_.back());
    const std::size_t k =
        static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
    const double dx = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / dx;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2 * s3 - 3 * s2 + 1) * h_[k] + (s3 - 2 * s2 + s) * dx * slopes_[k] +
                     (-2 * s3 + 3 * s2) * h_[k + 1] + (s3 - s2) * dx * slopes_[k + 1];
    // monotone segments stay inside their endpoint values; this only trims rounding
    return std::clamp(v, h_[k + 1], h_[k]);
}

double FittedCCDF::ccdf(double x) const {
    if (x <= 0.0)
        return 1.0;
    if (x <= 1.0)
        return 1.0 - zero_mass_;
    return (1.0 - zero_mass_) * std::pow(10.0, std::min(0.0, log_cond(std::log10(x))));
}

double FittedCCDF::quantile(double u) const {
    if (u < zero_mass_)
        return 0.0;
    const double level = 1.0 - u;  // want sup{x : ccdf(x) >= level}
    const auto cap = static_cast<double>(support_cap_);
    if (support_cap_ < 1)
        return 0.0;
    const double hi_x = cap + 1.0;
    if (ccdf(hi_x) >= level)
        return cap;
    double lo = 0.0, hi = std::log10(hi_x);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double c = ccdf(std::pow(10.0, mid));
        if (c >= level)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 || std::abs(c - level) < 1e-12)
            break;
    }
    return std::min(cap, std::pow(10.0, lo));
}

FittedCCDF fit_ccdf(std::span<const std::int64_t> samples, std::size_t target_size,
                    const FitOptions& options) {
    if (samples.size() < 10)
        throw std::invalid_argument("fit_ccdf: need at least 10 samples, got " +
                                    std::to_string(samples.size()));
    if (target_size == 0)
        throw std::invalid_argument("fit_ccdf: target size must be positive");
    std::map<std::int64_t, std::size_t> counts;
    for (std::int64_t s : samples) {
        if (s < 0)
            throw std::invalid_argument("fit_ccdf: negative degree " + std::to_string(s));
        ++counts[s];
    }
    if (counts.size() < 2)
        throw DegenerateDistribution(counts.begin()->first);

    const double total = static_cast<double>(samples.size());
    const std::size_t zeros = counts.contains(0) ? counts[0] : 0;
    const double zero_mass = static_cast<double>(zeros) / total;
    const std::size_t positives = samples.size() - zeros;
    const double pos = static_cast<double>(positives);

    // positive-part CCDF in log-log coordinates
    std::vector<double> t, y, w;
    std::vector<double> support;  // supporting sample count per point
    if (counts.upper_bound(0)->first > 1) {
        t.push_back(0.0);
        y.push_back(0.0);
        support.push_back(pos);
    }
    std::size_t at_least = positives;
    for (auto it = counts.upper_bound(0); it != counts.end(); ++it) {
        const double p = static_cast<double>(at_least) / pos;
        t.push_back(std::log10(static_cast<double>(it->first)));
        y.push_back(std::log10(p));
        support.push_back(static_cast<double>(at_least));
        at_least -= it->second;
    }

    FittedCCDF fit;
    std::vector<double> knot_t, knot_h;
    double slope = 0.0;
    double lambda = 0.0, edf = 0.0;
    bool bracketed = false;
    bool local_tail = true;

    if (t.size() < 4) {
        // too few distinct values to smooth: interpolate the points and
        // close the tail at half a sample just past the maximum
        knot_t = t;
        knot_h = y;
        const double last = std::pow(10.0, t.back());
        const double next_t = std::log10(last + 1.0);
        const double next_h = std::log10(0.5 / pos);
        slope = (next_h - y.back()) / (next_t - t.back());
    } else {
        // inverse-variance weights for log10 of a binomial proportion; the
        // first point is exact (ccdf = 1) and is pinned
        double max_w = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double p = std::pow(10.0, y[i]);
            if (p < 1.0) {
                w.push_back(support[i] / (1.0 - p));
                max_w = std::max(max_w, w.back());
            } else {
                w.push_back(0.0);
            }
        }
        for (double& wi : w)
            if (wi == 0.0)
                wi = 100.0 * max_w;

        const double fallback =
            std::min(options.max_fallback_edf, static_cast<double>(counts.size()) - 1.0);
        auto spline = SmoothingSpline::fit_gcv(t, y, w, std::max(2.5, fallback));
        lambda = spline.selection().lambda;
        edf = spline.selection().edf;
        bracketed = spline.selection().gcv_bracketed;

        const int grid = std::max(16, options.grid_points);
        const double t_end = t.back();
        const double offset = spline(0.0);
        knot_t.resize(grid);
        knot_h.resize(grid);
        for (int i = 0; i < grid; ++i) {
            knot_t[i] = t_end * i / (grid - 1);
            knot_h[i] = std::min(0.0, spline(knot_t[i]) - offset);
        }
        knot_h[0] = 0.0;
        make_nonincreasing(knot_h);
        knot_h[0] = 0.0;

        // End window: the last share of the distinct values. Upper window:
        // every value in the top share of the samples, weighted by its count.
        // The upper line is used unless the samples at the start of the end
        // window reject it; a bending top then keeps the local end slope.
        FittedCCDF shape(0.0, knot_t, knot_h, -1.0, 1);
        const std::size_t d = t.size();
        const std::size_t k = std::min(
            d, std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(options.tail_fraction * d))));
        std::vector<double> end_t, end_h, end_w, up_t, up_h, up_w;
        for (std::size_t i = 0; i < d; ++i) {
            const bool in_end = i + k >= d;
            if (!in_end && std::pow(10.0, y[i]) > options.tail_fraction)
                continue;
            const double h = shape.log_cond(t[i]);
            if (in_end) {
                end_t.push_back(t[i]);
                end_h.push_back(h);
                end_w.push_back(1.0);
            }
            up_t.push_back(t[i]);
            up_h.push_back(h);
            up_w.push_back(support[i] - (i + 1 < d ? support[i + 1] : 0.0));
        }
        slope = least_squares_slope(end_t, end_h, end_w);
        local_tail = true;
        if (up_t.size() > end_t.size()) {
            const auto [icept, up_slope] = least_squares_line(up_t, up_h, up_w);
            const double expected = pos * std::pow(10.0, icept + up_slope * t[d - k]);
            if (std::abs(support[d - k] - expected) <= options.tail_check_z * std::sqrt(expected)) {
                slope = up_slope;
                local_tail = false;
            }
        }
    }
    slope = std::min(slope, -options.min_tail_steepness);

    const double eps = 1.0 / (options.epsilon_factor * static_cast<double>(target_size));
    FittedCCDF uncapped(zero_mass, knot_t, knot_h, slope, 1);
    std::int64_t cap = 0;
    if (uncapped.ccdf(1.0) >= eps) {
        // solve (1 - z) 10^h(t) = eps
        const double target = std::log10(eps / (1.0 - zero_mass));
        double t_star;
        if (target <= knot_h.back()) {
            t_star = knot_t.back() + (target - knot_h.back()) / slope;
        } else {
            double lo = 0.0, hi = knot_t.back();
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (uncapped.log_cond(mid) >= target)
                    lo = mid;
                else
                    hi = mid;
            }
            t_star = lo;
        }
        t_star = std::min(t_star, 12.0);
        cap = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::pow(10.0, t_star))));
        while (cap > 1 && uncapped.ccdf(static_cast<double>(cap)) < eps)
            --cap;
        while (cap < kMaxSupportCap && uncapped.ccdf(static_cast<double>(cap + 1)) >= eps)
            ++cap;
        // no node of a simple N-node graph has N or more neighbors
        cap = std::min<std::int64_t>(cap, std::max<std::size_t>(1, target_size - 1));
    }

    fit = FittedCCDF(zero_mass, std::move(knot_t), std::move(knot_h), slope, cap);
    fit.lambda = lambda;
    fit.edf = edf;
    fit.gcv_bracketed = bracketed;
    fit.local_tail = local_tail;
    fit.epsilon = eps;
    return fit;
}

std::vector<std::int64_t> sample_degrees(const FittedCCDF& fit, std::size_t count, Rng& rng) {
    std::vector<std::int64_t> out;
    out.reserve(count);
    const double n = static_cast<double>(count);
    for (std::size_t s = 0; s < count; ++s) {
        const double v = rng.uniform();
        const double u = 1.0 - (static_cast<double>(s) + v) / n;
        const double x = fit.quantile(std::clamp(u, 0.0, std::nextafter(1.0, 0.0)));
        out.push_back(std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(x)),
                                             fit.support_cap()));
    }
    rng.shuffle(out);
    return out;
}

void to_json(nlohmann::json& j, const FittedCCDF& f) {
    j = nlohmann::json{{"zero_mass", f.zero_mass()},
                       {"log_degree", std::vector<double>(f.log_degree().begin(), f.log_degree().end())},
                       {"log_cond_ccdf",
                        std::vector<double>(f.log_cond_ccdf().begin(), f.log_cond_ccdf().end())},
                       {"tail_slope", f.tail_slope()},
                       {"support_cap", f.support_cap()},
                       {"epsilon", f.epsilon},
                       {"lambda", f.lambda},
                       {"edf", f.edf},
                       {"gcv_bracketed", f.gcv_bracketed},
                       {"local_tail", f.local_tail}};
}

void from_json(const nlohmann::json& j, FittedCCDF& f) {
    f = FittedCCDF(j.at("zero_mass").get<double>(), j.at("log_degree").get<std::vector<double>>(),
                   j.at("log_cond_ccdf").get<std::vector<double>>(), j.at("tail_slope").get<double>(),
                   j.at("support_cap").get<std::int64_t>());
    f.epsilon = j.value("epsilon", 0.0);
    f.lambda = j.value("lambda", 0.0);
    f.edf = j.value("edf", 0.0);
    f.gcv_bracketed = j.value("gcv_bracketed", false);
    f.local_tail = j.value("local_tail", false);
}

}  // namespace astopo
