#include "astopo/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <tuple>
#include <unordered_map>

namespace astopo {

namespace {

std::optional<std::uint64_t> as_integer(std::string_view s) {
    if (s.empty() || s.size() > 19)
        return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

}  // namespace

void to_json(nlohmann::json& j, const CleaningReport& r) {
    j = nlohmann::json{{"dropped_sibling", r.dropped_sibling},
                       {"dropped_self_loop", r.dropped_self_loop},
                       {"collapsed_duplicate", r.collapsed_duplicate},
                       {"conflicting_duplicate", r.conflicting_duplicate},
                       {"lcc_nodes", r.lcc_nodes},
                       {"lcc_edges", r.lcc_edges}};
}

void from_json(const nlohmann::json& j, CleaningReport& r) {
    j.at("dropped_sibling").get_to(r.dropped_sibling);
    j.at("dropped_self_loop").get_to(r.dropped_self_loop);
    j.at("collapsed_duplicate").get_to(r.collapsed_duplicate);
    j.at("conflicting_duplicate").get_to(r.conflicting_duplicate);
    j.at("lcc_nodes").get_to(r.lcc_nodes);
    j.at("lcc_edges").get_to(r.lcc_edges);
}

std::vector<EdgeRecord> parse_edge_list(std::istream& in) {
    std::vector<EdgeRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;

        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            auto bar = rest.find('|');
            fields.push_back(rest.substr(0, bar));
            if (bar == std::string_view::npos)
                break;
            rest.remove_prefix(bar + 1);
        }
        if (fields.size() != 3)
            throw ParseError(lineno, "expected 3 '|'-separated fields, got " +
                                         std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(lineno, "empty AS label");
        int rel = 0;
        const std::string_view r = fields[2];
        auto [ptr, ec] = std::from_chars(r.data(), r.data() + r.size(), rel);
        if (ec != std::errc() || ptr != r.data() + r.size())
            throw ParseError(lineno, "relationship is not an integer: '" + std::string(r) + "'");
        if (rel < -1 || rel > 1)
            throw ParseError(lineno, "relationship code " + std::to_string(rel) +
                                         " not in {-1, 0, 1}");
        records.push_back({std::string(fields[0]), std::string(fields[1]), rel});
    }
    if (in.bad())
        throw IoError("read failure");
    return records;
}

namespace {

AnnotatedGraph build(const std::vector<EdgeRecord>& records, CleaningReport* report, bool lcc_only) {
    CleaningReport rep;
    std::unordered_map<std::string, node_t> ids;
    std::vector<std::string> labels;
    auto id_of = [&](const std::string& label) {
        auto [it, inserted] = ids.emplace(label, static_cast<node_t>(labels.size()));
        if (inserted)
            labels.push_back(label);
        return it->second;
    };

    std::vector<Edge> raw;
    raw.reserve(records.size());
    for (const EdgeRecord& r : records) {
        if (r.rel == 1) {
            ++rep.dropped_sibling;
            continue;
        }
        if (r.a == r.b) {
            ++rep.dropped_self_loop;
            continue;
        }
        const node_t a = id_of(r.a);
        const node_t b = id_of(r.b);
        if (r.rel == -1)
            raw.push_back({b, a, EdgeKind::C2P});  // a provides transit to b
        else
            raw.push_back({a, b, EdgeKind::P2P});
    }

    SimplifyReport simp;
    auto edges = simplify_edges(raw, &simp);
    rep.collapsed_duplicate = simp.duplicates;
    rep.conflicting_duplicate = simp.conflicting_duplicates;
    if (edges.empty()) {
        if (report)
            *report = rep;
        throw EmptyGraphError();
    }

    const std::size_t node_count = labels.size();
    AnnotatedGraph full(node_count, std::move(edges), std::move(labels));
    AnnotatedGraph lcc = largest_connected_component(full);
    rep.lcc_nodes = lcc.node_count();
    rep.lcc_edges = lcc.edge_count();
    if (report)
        *report = rep;
    return lcc_only ? lcc : full;
}

}  // namespace

AnnotatedGraph clean_and_build(const std::vector<EdgeRecord>& records, CleaningReport* report) {
    return build(records, report, true);
}

AnnotatedGraph clean_and_build_all(const std::vector<EdgeRecord>& records, CleaningReport* report) {
    return build(records, report, false);
}

bool label_less(const std::string& a, const std::string& b) {
    auto ia = as_integer(a);
    auto ib = as_integer(b);
    if (ia && ib)
        return *ia != *ib ? *ia < *ib : a < b;
    if (ia || ib)
        return ia.has_value();  // integer labels sort before the rest
    return a < b;
}

std::size_t write_edge_list(const AnnotatedGraph& graph, std::ostream& out) {
    struct Line {
        const std::string* first;
        const std::string* second;
        int rel;
    };
    std::vector<Line> lines;
    lines.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) {
        const std::string& lu = graph.label(e.u);
        const std::string& lv = graph.label(e.v);
        if (e.kind == EdgeKind::C2P)
            lines.push_back({&lv, &lu, -1});
        else if (label_less(lv, lu))
            lines.push_back({&lv, &lu, 0});
        else
            lines.push_back({&lu, &lv, 0});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
        if (*x.first != *y.first)
            return label_less(*x.first, *y.first);
        if (*x.second != *y.second)
            return label_less(*x.second, *y.second);
        return x.rel < y.rel;
    });

    std::string buffer;
    for (const Line& l : lines) {
        buffer += *l.first;
        buffer += '|';
        buffer += *l.second;
        buffer += l.rel < 0 ? "|-1\n" : "|0\n";
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (!out)
        throw IoError("write failure");
    return buffer.size();
}

AnnotatedGraph read_graph_file(const std::string& path, CleaningReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    return clean_and_build(parse_edge_list(in), report);
}

AnnotatedGraph read_graph_file_all(const std::string& path, CleaningReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    return clean_and_build_all(parse_edge_list(in), report);
}

void write_graph_file(const AnnotatedGraph& graph, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    write_edge_list(graph, out);
}

}  // namespace astopo
