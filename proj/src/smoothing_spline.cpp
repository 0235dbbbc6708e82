#include "astopo/smoothing_spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace astopo {

namespace {

// Symmetric pentadiagonal matrix stored by diagonals: d0[i] = M(i,i),
// d1[i] = M(i,i+1), d2[i] = M(i,i+2).
struct Penta {
    std::vector<double> d0, d1, d2;
    explicit Penta(std::size_t m) : d0(m, 0.0), d1(m, 0.0), d2(m, 0.0) {}
    std::size_t size() const { return d0.size(); }
};

// LDL^T with unit lower-triangular L of bandwidth 2: l1[i] = L(i+1,i),
// l2[i] = L(i+2,i).
struct BandLdl {
    std::vector<double> d, l1, l2;

    explicit BandLdl(const Penta& a) {
        const std::size_t m = a.size();
        d.assign(m, 0.0);
        l1.assign(m, 0.0);
        l2.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            double di = a.d0[i];
            if (i >= 1)
                di -= l1[i - 1] * l1[i - 1] * d[i - 1];
            if (i >= 2)
                di -= l2[i - 2] * l2[i - 2] * d[i - 2];
            if (!(di > 0.0))
                throw std::runtime_error("smoothing spline: system not positive definite");
            d[i] = di;
            if (i + 1 < m) {
                double v = a.d1[i];
                if (i >= 1)
                    v -= l2[i - 1] * l1[i - 1] * d[i - 1];
                l1[i] = v / di;
            }
            if (i + 2 < m)
                l2[i] = a.d2[i] / di;
        }
    }

    std::vector<double> solve(std::vector<double> b) const {
        const std::size_t m = d.size();
        for (std::size_t i = 0; i < m; ++i) {
            if (i >= 1)
                b[i] -= l1[i - 1] * b[i - 1];
            if (i >= 2)
                b[i] -= l2[i - 2] * b[i - 2];
        }
        for (std::size_t i = 0; i < m; ++i)
            b[i] /= d[i];
        for (std::size_t k = m; k-- > 0;) {
            if (k + 1 < m)
                b[k] -= l1[k] * b[k + 1];
            if (k + 2 < m)
                b[k] -= l2[k] * b[k + 2];
        }
        return b;
    }

    // Central band (|i-j| <= 2) of the inverse, by the backward recurrence
    // from L^T S = D^{-1} L^{-1}.
    Penta inverse_band() const {
        const std::size_t m = d.size();
        Penta s(m);
        for (std::size_t k = m; k-- > 0;) {
            const double a1 = k + 1 < m ? l1[k] : 0.0;
            const double a2 = k + 2 < m ? l2[k] : 0.0;
            const double s11 = k + 1 < m ? s.d0[k + 1] : 0.0;
            const double s12 = k + 2 < m ? s.d1[k + 1] : 0.0;
            const double s22 = k + 2 < m ? s.d0[k + 2] : 0.0;
            if (k + 2 < m)
                s.d2[k] = -a1 * s12 - a2 * s22;
            if (k + 1 < m)
                s.d1[k] = -a1 * s11 - a2 * s12;
            s.d0[k] = 1.0 / d[k] - a1 * (k + 1 < m ? s.d1[k] : 0.0) -
                      a2 * (k + 2 < m ? s.d2[k] : 0.0);
        }
        return s;
    }
};

}  // namespace

struct SmoothingSpline::Problem {
    std::vector<double> x, y, w, h;
    std::size_t n = 0, m = 0;
    Penta r{0}, qwq{0};
    std::vector<double> qty;
    double scale = 1.0;  // tr(R) / tr(Q^T W^-1 Q)

    Problem(std::span<const double> xs, std::span<const double> ys, std::span<const double> ws)
        : x(xs.begin(), xs.end()), y(ys.begin(), ys.end()), w(ws.begin(), ws.end()) {
        n = x.size();
        if (n < 3 || y.size() != n || w.size() != n)
            throw std::invalid_argument("smoothing spline: need >= 3 points with matching y, w");
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(w[i] > 0.0) || !std::isfinite(w[i]))
                throw std::invalid_argument("smoothing spline: weights must be positive");
            wsum += w[i];
            if (i > 0 && !(x[i] > x[i - 1]))
                throw std::invalid_argument("smoothing spline: knots must be strictly increasing");
        }
        for (double& wi : w)
            wi *= static_cast<double>(n) / wsum;

        m = n - 2;
        h.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            h[i] = x[i + 1] - x[i];

        // Q(i, j) for interior column j is nonzero at rows j, j+1, j+2
        auto q = [&](std::size_t j, int off) {
            switch (off) {
            case 0: return 1.0 / h[j];
            case 1: return -1.0 / h[j] - 1.0 / h[j + 1];
            default: return 1.0 / h[j + 1];
            }
        };

        r = Penta(m);
        qwq = Penta(m);
        qty.assign(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            r.d0[j] = (h[j] + h[j + 1]) / 3.0;
            if (j + 1 < m)
                r.d1[j] = h[j + 1] / 6.0;
            for (int a = 0; a < 3; ++a) {
                const std::size_t row = j + a;
                qty[j] += q(j, a) * y[row];
                qwq.d0[j] += q(j, a) * q(j, a) / w[row];
            }
            // column j+1 shares rows j+1, j+2; column j+2 shares row j+2
            if (j + 1 < m)
                qwq.d1[j] = q(j, 1) * q(j + 1, 0) / w[j + 1] + q(j, 2) * q(j + 1, 1) / w[j + 2];
            if (j + 2 < m)
                qwq.d2[j] = q(j, 2) * q(j + 2, 0) / w[j + 2];
        }
        double tr_r = 0.0, tr_q = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            tr_r += r.d0[j];
            tr_q += qwq.d0[j];
        }
        scale = tr_r / tr_q;
    }

    struct Solution {
        std::vector<double> g, gamma;
        double edf = 0.0, rss = 0.0, gcv = 0.0;
    };

    Solution solve(double lambda) const {
        Penta a(m);
        for (std::size_t j = 0; j < m; ++j) {
            a.d0[j] = r.d0[j] + lambda * qwq.d0[j];
            a.d1[j] = r.d1[j] + lambda * qwq.d1[j];
            a.d2[j] = r.d2[j] + lambda * qwq.d2[j];
        }
        BandLdl ldl(a);
        Solution s;
        std::vector<double> gam = ldl.solve(qty);

        // g = y - lambda W^-1 Q gamma
        s.g = y;
        for (std::size_t j = 0; j < m; ++j) {
            s.g[j] -= lambda * gam[j] / h[j] / w[j];
            s.g[j + 1] -= lambda * gam[j] * (-1.0 / h[j] - 1.0 / h[j + 1]) / w[j + 1];
            s.g[j + 2] -= lambda * gam[j] / h[j + 1] / w[j + 2];
        }
        s.gamma.assign(n, 0.0);
        std::copy(gam.begin(), gam.end(), s.gamma.begin() + 1);

        // tr(A) = n - lambda * sum_i (1/w_i) (Q S Q^T)_ii
        Penta inv = ldl.inverse_band();
        auto sband = [&](std::size_t i, std::size_t j) {
            if (i > j)
                std::swap(i, j);
            switch (j - i) {
            case 0: return inv.d0[i];
            case 1: return inv.d1[i];
            case 2: return inv.d2[i];
            default: return 0.0;
            }
        };
        double tr = 0.0;
        for (std::size_t row = 0; row < n; ++row) {
            // interior columns touching this row: j = row-2, row-1, row
            double acc = 0.0;
            for (std::size_t ja = (row >= 2 ? row - 2 : 0); ja <= row && ja < m; ++ja) {
                const double qa = qcoef(ja, row);
                for (std::size_t jb = (row >= 2 ? row - 2 : 0); jb <= row && jb < m; ++jb)
                    acc += qa * sband(ja, jb) * qcoef(jb, row);
            }
            tr += acc / w[row];
        }
        s.edf = static_cast<double>(n) - lambda * tr;
        for (std::size_t i = 0; i < n; ++i)
            s.rss += w[i] * (y[i] - s.g[i]) * (y[i] - s.g[i]);
        const double denom = 1.0 - s.edf / static_cast<double>(n);
        s.gcv = (s.rss / static_cast<double>(n)) / (denom * denom);
        return s;
    }

    double qcoef(std::size_t j, std::size_t row) const {
        switch (row - j) {
        case 0: return 1.0 / h[j];
        case 1: return -1.0 / h[j] - 1.0 / h[j + 1];
        case 2: return 1.0 / h[j + 1];
        default: return 0.0;
        }
    }
};

namespace {

constexpr double kLogLambdaMin = -10.0;
constexpr double kLogLambdaMax = 8.0;
constexpr int kGridPoints = 73;

}  // namespace

SmoothingSpline SmoothingSpline::fit_lambda(std::span<const double> x, std::span<const double> y,
                                            std::span<const double> w, double lambda) {
    Problem p(x, y, w);
    auto s = p.solve(lambda);
    SmoothingSpline out;
    out.x_ = p.x;
    out.g_ = std::move(s.g);
    out.gamma_ = std::move(s.gamma);
    out.sel_ = {lambda, s.edf, s.gcv, false};
    return out;
}

SmoothingSpline SmoothingSpline::fit_edf(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> w, double edf) {
    Problem p(x, y, w);
    // edf decreases monotonically in lambda, from n down to 2
    double lo = kLogLambdaMin - 4.0, hi = kLogLambdaMax + 4.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (p.solve(p.scale * std::pow(10.0, mid)).edf > edf)
            lo = mid;
        else
            hi = mid;
    }
    const double lambda = p.scale * std::pow(10.0, 0.5 * (lo + hi));
    auto s = p.solve(lambda);
    SmoothingSpline out;
    out.x_ = p.x;
    out.g_ = std::move(s.g);
    out.gamma_ = std::move(s.gamma);
    out.sel_ = {lambda, s.edf, s.gcv, false};
    return out;
}

SmoothingSpline SmoothingSpline::fit_gcv(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> w, double fallback_edf) {
    Problem p(x, y, w);
    auto score = [&](double log_lambda) {
        auto s = p.solve(p.scale * std::pow(10.0, log_lambda));
        return std::isfinite(s.gcv) ? s.gcv : std::numeric_limits<double>::infinity();
    };

    const double step = (kLogLambdaMax - kLogLambdaMin) / (kGridPoints - 1);
    int best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGridPoints; ++i) {
        const double v = score(kLogLambdaMin + step * i);
        if (v < best_score) {
            best_score = v;
            best = i;
        }
    }
    if (best == 0 || best == kGridPoints - 1) {
        SmoothingSpline out = fit_edf(x, y, w, fallback_edf);
        out.sel_.gcv_bracketed = false;
        return out;
    }

    // golden-section search on the bracketing grid cell pair
    double a = kLogLambdaMin + step * (best - 1);
    double b = kLogLambdaMin + step * (best + 1);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = score(c), fd = score(d);
    for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = score(d);
        }
    }
    const double lambda = p.scale * std::pow(10.0, 0.5 * (a + b));
    auto s = p.solve(lambda);
    SmoothingSpline out;
    out.x_ = p.x;
    out.g_ = std::move(s.g);
    out.gamma_ = std::move(s.gamma);
    out.sel_ = {lambda, s.edf, s.gcv, true};
    return out;
}

double SmoothingSpline::operator()(double x) const {
    if (x <= x_.front())
        return g_.front() + derivative(x_.front()) * (x - x_.front());
    if (x >= x_.back())
        return g_.back() + derivative(x_.back()) * (x - x_.back());
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = x - x_[i];
    const double b = x_[i + 1] - x;
    return (b * g_[i] + a * g_[i + 1]) / h -
           a * b / 6.0 * ((1.0 + a / h) * gamma_[i + 1] + (1.0 + b / h) * gamma_[i]);
}

double SmoothingSpline::derivative(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_.front()) {
        const double h = x_[1] - x_[0];
        return (g_[1] - g_[0]) / h - h * gamma_[1] / 6.0;
    }
    if (x >= x_.back()) {
        const double h = x_[n - 1] - x_[n - 2];
        return (g_[n - 1] - g_[n - 2]) / h + h * gamma_[n - 2] / 6.0;
    }
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = x - x_[i];
    const double b = x_[i + 1] - x;
    // derivative of the cubic Hermite form in terms of second derivatives
    return (g_[i + 1] - g_[i]) / h - (3.0 * b * b - h * h) / (6.0 * h) * gamma_[i] +
           (3.0 * a * a - h * h) / (6.0 * h) * gamma_[i + 1];
}

}  // namespace astopo
