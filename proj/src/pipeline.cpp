#include "astopo/pipeline.hpp"

#include <stdexcept>

namespace astopo {

Order parse_order(const std::string& text) {
    if (text == "1k" || text == "1K")
        return Order::OneK;
    if (text == "2k" || text == "2K")
        return Order::TwoK;
    throw std::invalid_argument("order must be 1k or 2k, got '" + text + "'");
}

std::string to_string(Order order) { return order == Order::OneK ? "1k" : "2k"; }

AnnotationFits fit_annotations(const SummaryProfile& profile, std::size_t target,
                               const FitOptions& options) {
    static constexpr std::array<StubColor, 3> colors{StubColor::Customer, StubColor::Provider,
                                                     StubColor::Peer};
    static constexpr std::array<const char*, 3> names{"customer", "provider", "peer"};
    AnnotationFits fits;
    for (std::size_t m = 0; m < 3; ++m) {
        const auto samples = marginal_ad(profile, colors[m]);
        try {
            fits[m] = fit_ccdf(samples, target, options);
        } catch (const DegenerateDistribution& e) {
            fits[m] = FittedCCDF::point_mass(e.value());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string("fitting the ") + names[m] +
                                        " stub distribution: " + e.what());
        }
    }
    return fits;
}

std::size_t resolved_size(const SummaryProfile& profile, const RunConfig& config) {
    return config.target_size == 0 ? profile.n : config.target_size;
}

GeneratedGraph generate_member(const SummaryProfile& profile, const AnnotationFits& fits,
                               const RunConfig& config, std::size_t index) {
    const std::size_t target = resolved_size(profile, config);
    Rng member = Rng(config.seed).stream("member", index);
    GeneratedGraph out;
    Rng rescale = member.stream("rescale");
    out.add = rescale_add(profile, fits, target, rescale);
    Rng build = member.stream("construct");
    if (config.order == Order::OneK)
        out.graph = construct_1k(out.add, build, &out.construction);
    else
        out.graph = construct_2k(out.add, profile, build, &out.construction);
    return out;
}

nlohmann::json member_metadata(const RunConfig& config, std::size_t index,
                               const GeneratedGraph& member) {
    nlohmann::json j;
    j["seed"] = config.seed;
    j["member"] = index;
    j["order"] = to_string(config.order);
    j["target_size"] = member.add.size();
    j["construction"] = member.construction;
    j["nodes"] = member.graph.node_count();
    j["edges"] = member.graph.edge_count();
    return j;
}

}  // namespace astopo
