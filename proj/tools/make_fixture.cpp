// Writes a deterministic synthetic AS-style topology: a tier-1 peering
// clique, customer-provider links attached preferentially to older nodes
// with power-law weights, and peering between nodes of similar rank.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "astopo/random.hpp"

using astopo::Rng;

namespace {

struct Params {
    std::size_t nodes = 19036;
    std::size_t c2p = 36188;
    std::size_t p2p = 3927;
    std::size_t tier1 = 10;
    double exponent = 1.25;
    double offset = 4.0;
    double peer_spread = 1.0;
    std::uint64_t seed = 2006;
};

std::uint64_t key(std::uint32_t a, std::uint32_t b) {
    if (a > b)
        std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
}

double normal(Rng& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

int main(int argc, char** argv) {
    Params p;
    std::string out_path;
    CLI::App app{"Generate the bundled synthetic topology fixture"};
    app.add_option("output", out_path, "edge list to write")->required();
    app.add_option("--nodes", p.nodes);
    app.add_option("--c2p", p.c2p);
    app.add_option("--p2p", p.p2p);
    app.add_option("--seed", p.seed);
    app.add_option("--offset", p.offset, "flattens the weights of the oldest nodes");
    app.add_option("--exponent", p.exponent);
    CLI11_PARSE(app, argc, argv);

    Rng rng(p.seed);
    const std::size_t n = p.nodes;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + std::pow(static_cast<double>(i + 1) + p.offset, -p.exponent);
    // Index below `limit` drawn with probability proportional to its weight.
    auto weighted_below = [&](std::size_t limit) {
        const double u = rng.uniform() * prefix[limit];
        auto it = std::upper_bound(prefix.begin() + 1, prefix.begin() + limit + 1, u);
        return static_cast<std::uint32_t>(it - prefix.begin() - 1);
    };

    // Provider counts: 1 + geometric, then nudged to the exact total.
    const std::size_t members = n - p.tier1;
    const double extra_mean = static_cast<double>(p.c2p) / members - 1.0;
    const double stop = 1.0 / (1.0 + extra_mean);
    std::vector<std::size_t> providers(n, 0);
    std::size_t total = 0;
    for (std::size_t i = p.tier1; i < n; ++i) {
        std::size_t k = 1;
        while (rng.uniform() > stop && k < i)
            ++k;
        providers[i] = k;
        total += k;
    }
    while (total != p.c2p) {
        const std::size_t i = p.tier1 + rng.below(members);
        if (total > p.c2p && providers[i] > 1) {
            --providers[i];
            --total;
        } else if (total < p.c2p && providers[i] < i) {
            ++providers[i];
            ++total;
        }
    }

    std::unordered_set<std::uint64_t> present;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> c2p;  // (provider, customer)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> p2p;
    for (std::uint32_t a = 0; a < p.tier1; ++a)
        for (std::uint32_t b = a + 1; b < p.tier1; ++b) {
            present.insert(key(a, b));
            p2p.emplace_back(a, b);
        }
    for (std::size_t i = p.tier1; i < n; ++i) {
        const auto c = static_cast<std::uint32_t>(i);
        for (std::size_t k = 0; k < providers[i];) {
            const std::uint32_t prov = weighted_below(i);
            if (present.insert(key(prov, c)).second) {
                c2p.emplace_back(prov, c);
                ++k;
            }
        }
    }
    while (p2p.size() < p.p2p) {
        const std::uint32_t a = weighted_below(n);
        const double target = (a + 1) * std::exp(p.peer_spread * normal(rng));
        const auto b = static_cast<std::uint32_t>(
            std::clamp<double>(std::round(target) - 1, 0.0, static_cast<double>(n - 1)));
        if (a == b || !present.insert(key(a, b)).second)
            continue;
        p2p.emplace_back(a, b);
    }

    // AS-number-like labels unrelated to attachment order.
    std::vector<std::uint32_t> label(n);
    std::iota(label.begin(), label.end(), 1u);
    Rng label_rng = rng.stream("labels");
    label_rng.shuffle(label);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    out << "# synthetic AS topology fixture: " << n << " nodes, " << c2p.size() << " c2p, "
        << p2p.size() << " p2p\n";
    for (const auto& [prov, cust] : c2p)
        out << label[prov] << '|' << label[cust] << "|-1\n";
    for (const auto& [a, b] : p2p)
        out << label[a] << '|' << label[b] << "|0\n";
    return 0;
}
