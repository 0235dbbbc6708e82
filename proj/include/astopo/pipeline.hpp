#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "astopo/construct.hpp"
#include "astopo/copula.hpp"
#include "astopo/fit.hpp"
#include "astopo/profile.hpp"

namespace astopo {

enum class Order { OneK, TwoK };

Order parse_order(const std::string& text);
std::string to_string(Order order);

struct RunConfig {
    std::uint64_t seed = 1;
    /// 0 keeps the profile's node count.
    std::size_t target_size = 0;
    Order order = Order::TwoK;
    double gamma = 2.1;
    std::size_t ensemble_count = 1;
    /// BFS sources for evaluation; 0 means all nodes.
    std::size_t sources = 0;
    FitOptions fit;
};

using AnnotationFits = std::array<FittedCCDF, 3>;

/// Fits the customer, provider and peer ADs for a target size. A constant
/// AD becomes a point mass.
AnnotationFits fit_annotations(const SummaryProfile& profile, std::size_t target,
                               const FitOptions& options = {});

struct GeneratedGraph {
    AnnotatedGraph graph;
    RescaledADD add;
    ConstructionReport construction;
};

/// Ensemble member `index`. Its randomness comes from the stream
/// ("member", index) of Rng(config.seed), so members are independent and the
/// same index at different target sizes shares its uniforms.
GeneratedGraph generate_member(const SummaryProfile& profile, const AnnotationFits& fits,
                               const RunConfig& config, std::size_t index);

std::size_t resolved_size(const SummaryProfile& profile, const RunConfig& config);

nlohmann::json member_metadata(const RunConfig& config, std::size_t index,
                               const GeneratedGraph& member);

}  // namespace astopo
