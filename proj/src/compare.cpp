#include "astopo/compare.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace astopo {
namespace {

double metric_value(const nlohmann::json& report, const std::string& field) {
    if (!report.contains(field) || !report.at(field).is_number())
        throw MissingMetric(field);
    return report.at(field).get<double>();
}

Tolerance parse_tolerance(const std::string& metric, const nlohmann::json& spec) {
    Tolerance t;
    if (spec.is_number()) {
        t.absolute = spec.get<double>();
    } else if (spec.is_object()) {
        t.absolute = spec.value("abs", 0.0);
        t.relative = spec.value("rel", 0.0);
    } else {
        throw std::invalid_argument("bad tolerance for " + metric);
    }
    if (t.absolute < 0 || t.relative < 0)
        throw std::invalid_argument("negative tolerance for " + metric);
    return t;
}

}  // namespace

const std::vector<std::string>& default_compared_metrics() {
    static const std::vector<std::string> names{
        "nodes",         "edges",         "c2p_edges",     "p2p_edges",
        "max_degree",    "avg_degree",    "assortativity", "laplacian_max",
        "laplacian_min_nonzero", "avg_distance", "avg_valid_distance"};
    return names;
}

std::vector<ComparisonRow> compare_reports(const nlohmann::json& a, const nlohmann::json& b,
                                           const nlohmann::json& tolerances) {
    std::vector<std::pair<std::string, Tolerance>> wanted;
    if (tolerances.is_null() || tolerances.empty()) {
        for (const auto& name : default_compared_metrics())
            if ((a.contains(name) && !a.at(name).is_null()) || (b.contains(name) && !b.at(name).is_null()))
                wanted.emplace_back(name, Tolerance{});
    } else {
        if (!tolerances.is_object())
            throw std::invalid_argument("tolerance spec must be a JSON object");
        for (const auto& [name, spec] : tolerances.items())
            wanted.emplace_back(name, parse_tolerance(name, spec));
    }

    std::vector<ComparisonRow> rows;
    for (const auto& [name, tol] : wanted) {
        ComparisonRow row;
        row.metric = name;
        row.a = metric_value(a, name);
        row.b = metric_value(b, name);
        row.tolerance = tol;
        row.pass = std::abs(row.a - row.b) <= tol.absolute + tol.relative * std::abs(row.a);
        rows.push_back(row);
    }
    return rows;
}

void print_comparison(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    std::size_t width = 6;
    for (const auto& r : rows)
        width = std::max(width, r.metric.size());
    out << std::left << std::setw(static_cast<int>(width)) << "metric" << "  " << std::right
        << std::setw(14) << "a" << std::setw(14) << "b" << std::setw(14) << "diff"
        << std::setw(10) << "abs" << std::setw(10) << "rel" << "  result\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(static_cast<int>(width)) << r.metric << "  " << std::right
            << std::setw(14) << std::setprecision(6) << r.a << std::setw(14) << r.b
            << std::setw(14) << (r.b - r.a) << std::setw(10) << r.tolerance.absolute
            << std::setw(10) << r.tolerance.relative << "  " << (r.pass ? "pass" : "FAIL") << '\n';
    }
}

}  // namespace astopo
