#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "astopo/fit.hpp"
#include "astopo/graph.hpp"
#include "astopo/profile.hpp"
#include "astopo/random.hpp"

namespace astopo {

template <std::size_t P>
using IntRow = std::array<std::int64_t, P>;

/// Empirical copula sample on the rank grid: u(j, m) = rank(j, m) / N,
/// where each coordinate's ranks are a permutation of 1..N.
class CopulaSample {
public:
    CopulaSample() = default;
    CopulaSample(std::size_t dim, std::size_t rows, std::vector<std::uint32_t> ranks)
        : dim_(dim), rows_(rows), ranks_(std::move(ranks)) {}

    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return rows_; }
    std::uint32_t rank(std::size_t j, std::size_t m) const { return ranks_[j * dim_ + m]; }
    double u(std::size_t j, std::size_t m) const {
        return static_cast<double>(rank(j, m)) / static_cast<double>(rows_);
    }

private:
    std::size_t dim_ = 0;
    std::size_t rows_ = 0;
    std::vector<std::uint32_t> ranks_;
};

/// N rows drawn uniformly with replacement.
template <std::size_t P>
std::vector<IntRow<P>> resample_rows(std::span<const IntRow<P>> samples, std::size_t count,
                                     Rng& rng) {
    if (samples.empty())
        throw std::invalid_argument("resample_rows: empty sample set");
    std::vector<IntRow<P>> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j)
        out.push_back(samples[rng.below(samples.size())]);
    return out;
}

/// Per-coordinate ranks under a non-decreasing sort; tied values are
/// ordered by independent random keys.
template <std::size_t P>
CopulaSample rank_transform(std::span<const IntRow<P>> rows, Rng& rng) {
    const std::size_t n = rows.size();
    if (n == 0)
        throw std::invalid_argument("rank_transform: no rows");
    std::vector<std::uint32_t> ranks(n * P);
    std::vector<std::uint32_t> order(n);
    std::vector<std::uint64_t> keys(n);
    for (std::size_t m = 0; m < P; ++m) {
        for (auto& k : keys)
            k = rng.next();
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (rows[a][m] != rows[b][m])
                return rows[a][m] < rows[b][m];
            if (keys[a] != keys[b])
                return keys[a] < keys[b];
            return a < b;
        });
        for (std::size_t r = 0; r < n; ++r)
            ranks[order[r] * P + m] = static_cast<std::uint32_t>(r + 1);
    }
    return CopulaSample(P, n, std::move(ranks));
}

/// Joins a copula with marginal samples: coordinate m of row j is the
/// ceil(u * N)-th smallest value of marginal m, i.e. the rank-th order
/// statistic. Each output column is a permutation of its marginal list.
template <std::size_t P>
std::vector<IntRow<P>> merge_with_marginals(const CopulaSample& copula,
                                            const std::array<std::vector<std::int64_t>, P>& marginals) {
    if (copula.dim() != P)
        throw std::invalid_argument("merge_with_marginals: dimension mismatch");
    const std::size_t n = copula.rows();
    std::array<std::vector<std::int64_t>, P> sorted;
    for (std::size_t m = 0; m < P; ++m) {
        if (marginals[m].size() != n)
            throw std::invalid_argument("merge_with_marginals: marginal " + std::to_string(m) +
                                        " has " + std::to_string(marginals[m].size()) +
                                        " values, copula has " + std::to_string(n) + " rows");
        sorted[m] = marginals[m];
        std::sort(sorted[m].begin(), sorted[m].end());
    }
    std::vector<IntRow<P>> out(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < P; ++m)
            out[j][m] = sorted[m][copula.rank(j, m) - 1];
    return out;
}

using RescaledADD = std::vector<DegreeVector>;

inline IntRow<3> to_row(const DegreeVector& d) { return {d.k1, d.k2, d.k3}; }
inline DegreeVector to_degree_vector(const IntRow<3>& r) { return {r[0], r[1], r[2]}; }

/// Rescales the ADD to `target` nodes: samples each AD from its fit, rescales
/// the ADD copula by resampling the measured degree vectors, and merges.
RescaledADD rescale_add(const SummaryProfile& profile, const std::array<FittedCCDF, 3>& fits,
                        std::size_t target, Rng& rng);

nlohmann::json rescaled_add_to_json(const RescaledADD& add);
RescaledADD rescaled_add_from_json(const nlohmann::json& j);

}  // namespace astopo
