#include "astopo/copula.hpp"

namespace astopo {

RescaledADD rescale_add(const SummaryProfile& profile, const std::array<FittedCCDF, 3>& fits,
                        std::size_t target, Rng& rng) {
    if (target == 0)
        throw std::invalid_argument("rescale_add: target size must be positive");

    std::array<std::vector<std::int64_t>, 3> marginals;
    for (std::size_t m = 0; m < 3; ++m) {
        Rng stream = rng.stream("ad_sample", m);
        marginals[m] = sample_degrees(fits[m], target, stream);
    }

    std::vector<IntRow<3>> measured;
    measured.reserve(profile.add_samples.size());
    for (const DegreeVector& d : profile.add_samples)
        measured.push_back(to_row(d));
    Rng resample_stream = rng.stream("add_resample");
    auto resampled = resample_rows<3>(measured, target, resample_stream);
    Rng rank_stream = rng.stream("add_ranks");
    CopulaSample copula = rank_transform<3>(resampled, rank_stream);

    auto merged = merge_with_marginals<3>(copula, marginals);
    RescaledADD out;
    out.reserve(target);
    for (const auto& row : merged)
        out.push_back(to_degree_vector(row));
    return out;
}

nlohmann::json rescaled_add_to_json(const RescaledADD& add) {
    auto j = nlohmann::json::array();
    for (const DegreeVector& d : add)
        j.push_back({d.k1, d.k2, d.k3});
    return j;
}

RescaledADD rescaled_add_from_json(const nlohmann::json& j) {
    RescaledADD out;
    for (const auto& row : j) {
        if (row.size() != 3)
            throw std::invalid_argument("rescaled ADD rows must have 3 entries");
        out.push_back({row[0].get<std::int64_t>(), row[1].get<std::int64_t>(),
                       row[2].get<std::int64_t>()});
    }
    return out;
}

}  // namespace astopo
