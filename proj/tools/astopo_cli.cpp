#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "astopo/compare.hpp"
#include "astopo/ingest.hpp"
#include "astopo/metrics.hpp"
#include "astopo/pipeline.hpp"
#include "astopo/profile.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace astopo;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_io = 2;

// Thrown for conditions that map to the validation exit code.
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::string member_name(std::size_t index) {
    std::ostringstream s;
    s << "graph_" << std::setw(3) << std::setfill('0') << index;
    return s.str();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

struct ExtractArgs {
    std::string input;
    std::string output;
    std::string report;
};

int run_extract(const ExtractArgs& args) {
    CleaningReport cleaning;
    AnnotatedGraph graph = read_graph_file(args.input, &cleaning);
    SummaryProfile profile = extract_profile(graph);
    write_profile_file(profile, args.output);
    const std::string report_path = args.report.empty() ? args.output + ".cleaning.json" : args.report;
    write_json(cleaning, report_path);
    std::cout << "profile: n=" << profile.n << " m=" << profile.m << " -> " << args.output << '\n';
    return exit_ok;
}

struct GenerateArgs {
    std::string profile;
    std::string order = "2k";
    std::string out_dir = ".";
    RunConfig config;
};

int run_generate(GenerateArgs& args) {
    args.config.order = parse_order(args.order);
    if (args.config.ensemble_count == 0)
        throw ValidationFailure("--count must be at least 1");
    SummaryProfile profile = read_profile_file(args.profile);
    const std::size_t target = resolved_size(profile, args.config);
    AnnotationFits fits = fit_annotations(profile, target, args.config.fit);

    const fs::path dir(args.out_dir);
    ensure_dir(dir);
    json fits_json = json::object();
    fits_json["customer"] = fits[0];
    fits_json["provider"] = fits[1];
    fits_json["peer"] = fits[2];
    write_json(fits_json, dir / "fits.json");

    for (std::size_t i = 0; i < args.config.ensemble_count; ++i) {
        GeneratedGraph member = generate_member(profile, fits, args.config, i);
        const std::string name = member_name(i);
        write_graph_file(member.graph, (dir / (name + ".txt")).string());
        write_json(rescaled_add_to_json(member.add), dir / (name + ".add.json"));
        write_json(member_metadata(args.config, i, member), dir / (name + ".json"));
        std::cout << name << ": nodes=" << member.graph.node_count()
                  << " edges=" << member.graph.edge_count() << '\n';
    }
    return exit_ok;
}

struct EvalArgs {
    std::vector<std::string> graphs;
    std::string out_dir = ".";
    std::string sources = "all";
    double gamma = 2.1;
    std::uint64_t seed = 1;
    bool no_valid = false;
    bool no_spectrum = false;
    bool scatter = false;
};

std::size_t parse_sources(const std::string& text) {
    if (text == "all")
        return 0;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || v == 0)
        throw ValidationFailure("--sources must be 'all' or a positive integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

int run_eval(const EvalArgs& args) {
    ReportOptions options;
    options.sources = parse_sources(args.sources);
    options.seed = args.seed;
    options.valid_paths = !args.no_valid;
    options.spectrum = !args.no_spectrum;

    const fs::path dir(args.out_dir);
    ensure_dir(dir);
    std::vector<GraphMetricsReport> reports;
    json index = json::array();
    for (const std::string& path : args.graphs) {
        AnnotatedGraph graph = read_graph_file_all(path);
        if (!is_connected(graph))
            throw ValidationFailure(path + ": graph is not connected");
        GraphMetricsReport report = scalar_report(graph, options);
        const std::string stem = fs::path(path).stem().string();
        write_json(report, dir / (stem + ".report.json"));
        if (args.scatter) {
            std::ofstream csv(dir / (stem + ".scatter.csv"), std::ios::binary | std::ios::trunc);
            if (!csv)
                throw IoError("cannot write scatter CSV for " + path);
            write_degree_scatter_csv(graph, csv);
        }
        index.push_back(path);
        reports.push_back(report);
        std::cout << path << ": nodes=" << report.nodes << " edges=" << report.edges
                  << " avg_degree=" << report.avg_degree << " max_degree=" << report.max_degree
                  << '\n';
    }
    if (reports.size() > 1) {
        json ensemble;
        ensemble["graphs"] = index;
        ensemble["stats"] = ensemble_stats(reports);
        const std::size_t rep = select_representative(reports, args.gamma);
        ensemble["representative"] = {{"index", rep},
                                      {"graph", args.graphs[rep]},
                                      {"gamma", args.gamma},
                                      {"max_degree", reports[rep].max_degree}};
        write_json(ensemble, dir / "ensemble.json");
        std::cout << "representative: " << args.graphs[rep] << '\n';
    }
    return exit_ok;
}

struct CompareArgs {
    std::string a;
    std::string b;
    std::string tolerances;
};

int run_compare(const CompareArgs& args) {
    json a = read_json(args.a);
    json b = read_json(args.b);
    json tol = json::object();
    if (!args.tolerances.empty()) {
        const auto first = args.tolerances.find_first_not_of(" \t\n");
        if (first != std::string::npos && args.tolerances[first] == '{') {
            try {
                tol = json::parse(args.tolerances);
            } catch (const json::parse_error& e) {
                throw IoError(std::string("--tolerances: ") + e.what());
            }
        } else {
            tol = read_json(args.tolerances);
        }
    }
    const auto rows = compare_reports(a, b, tol);
    print_comparison(rows, std::cout);
    for (const auto& r : rows)
        if (!r.pass)
            return exit_validation;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Annotated AS topology extraction, rescaling, generation and evaluation"};
    app.require_subcommand(1);

    ExtractArgs extract;
    auto* ex = app.add_subcommand("extract", "Measure the summary profile of an edge list");
    ex->add_option("input", extract.input, "edge list (a|b|rel)")->required();
    ex->add_option("output", extract.output, "profile JSON to write")->required();
    ex->add_option("--report", extract.report, "cleaning report path (default: <output>.cleaning.json)");

    GenerateArgs generate;
    auto* gen = app.add_subcommand("generate", "Rescale a profile and build random graphs");
    gen->add_option("profile", generate.profile, "profile JSON")->required();
    gen->add_option("--seed", generate.config.seed, "run seed");
    gen->add_option("--size", generate.config.target_size, "target node count (default: profile n)");
    gen->add_option("--order", generate.order, "1k or 2k")->check(CLI::IsMember({"1k", "2k"}));
    gen->add_option("--count", generate.config.ensemble_count, "ensemble size");
    gen->add_option("--out-dir", generate.out_dir, "output directory");

    EvalArgs eval;
    auto* ev = app.add_subcommand("eval", "Compute graph metrics");
    ev->add_option("graphs", eval.graphs, "edge lists")->required();
    ev->add_option("--out-dir", eval.out_dir, "output directory");
    ev->add_option("--sources", eval.sources, "BFS sources: all or a count");
    ev->add_option("--gamma", eval.gamma, "tail exponent for representative selection");
    ev->add_option("--seed", eval.seed, "seed for sampled sources");
    ev->add_flag("--no-valid", eval.no_valid, "skip valley-free distances");
    ev->add_flag("--no-spectrum", eval.no_spectrum, "skip Laplacian eigenvalues");
    ev->add_flag("--scatter", eval.scatter, "write per-node degree CSV");

    CompareArgs compare;
    auto* cmp = app.add_subcommand("compare", "Compare two metric reports");
    cmp->add_option("a", compare.a, "first report")->required();
    cmp->add_option("b", compare.b, "second report")->required();
    cmp->add_option("--tolerances", compare.tolerances, "tolerance JSON (inline or file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_io;
    }

    try {
        if (*ex)
            return run_extract(extract);
        if (*gen)
            return run_generate(generate);
        if (*ev)
            return run_eval(eval);
        if (*cmp)
            return run_compare(compare);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    }
    return exit_validation;
}
