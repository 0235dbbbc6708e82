#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace astopo {

class MissingMetric : public std::invalid_argument {
public:
    explicit MissingMetric(const std::string& field)
        : std::invalid_argument("missing metric field: " + field), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct Tolerance {
    double absolute = 0.0;
    double relative = 0.0;
};

struct ComparisonRow {
    std::string metric;
    double a = 0.0;
    double b = 0.0;
    Tolerance tolerance;
    bool pass = false;
};

/// Scalar report fields compared when the tolerance spec is empty.
const std::vector<std::string>& default_compared_metrics();

/// Tolerance spec: {"metric": 0.1} for an absolute bound, or
/// {"metric": {"abs": a, "rel": r}}. A metric passes when
/// |a - b| <= abs + rel * |a|. An empty spec compares the default metrics
/// for exact equality. Throws MissingMetric if a report lacks a field.
std::vector<ComparisonRow> compare_reports(const nlohmann::json& a, const nlohmann::json& b,
                                           const nlohmann::json& tolerances);

void print_comparison(const std::vector<ComparisonRow>& rows, std::ostream& out);

}  // namespace astopo
