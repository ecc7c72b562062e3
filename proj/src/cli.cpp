#include "framekit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include "framekit/error.hpp"
#include "framekit/io.hpp"
#include "framekit/projection.hpp"
#include "framekit/verify.hpp"

namespace framekit::cli {

namespace {

using io::Json;

constexpr const char* kCsvColumns = "level,l2_error,max_coord_error,max_dual_norm";

struct Common {
    double tol = TolerancePolicy{}.eig_tol;
    double rank_tol = TolerancePolicy{}.rank_tol_rel;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "json";

    TolerancePolicy policy() const {
        TolerancePolicy p;
        p.eig_tol = tol;
        p.rank_tol_rel = rank_tol;
        p.validate();
        return p;
    }
};

struct Options {
    Common common;
    std::string input;
    std::string vector_path;
    std::string levels;
    std::string permute;
    std::string track;
    std::string suite;
    std::size_t samples = 0;
    std::size_t trials = 0;
    bool exhaustive = false;
};

void add_common(CLI::App* sub, Common& c, bool with_seed) {
    sub->add_option("--tol", c.tol, "eigensolver convergence target")->capture_default_str();
    sub->add_option("--rank-tol", c.rank_tol, "relative threshold below which a singular value counts as zero")
        ->capture_default_str();
    if (with_seed) sub->add_option("--seed", c.seed, "seed for every random choice")->capture_default_str();
    sub->add_option("--out", c.out_path, "write the report to PATH instead of stdout");
    sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

Json header(const std::string& command, const Options& o) {
    Json j{{"command", command}};
    if (!o.input.empty()) j["input"] = o.input;
    j["tolerances"] = io::to_json(o.common.policy());
    return j;
}

std::vector<std::size_t> parse_levels(const std::string& text, std::size_t size) {
    if (text.empty()) {
        std::vector<std::size_t> all(size);
        for (std::size_t i = 0; i < size; ++i) all[i] = i + 1;
        return all;
    }
    auto parse = [&](std::string_view part) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size())
            throw Error(ErrorCode::invalid_input, "field 'levels' must look like a..b, got '" + text + "'");
        return v;
    };
    const auto dots = text.find("..");
    const std::size_t a = parse(std::string_view(text).substr(0, dots));
    const std::size_t b = dots == std::string::npos ? a : parse(std::string_view(text).substr(dots + 2));
    if (a == 0 || b < a || b > size)
        throw Error(ErrorCode::invalid_input, "field 'levels' range " + text + " must satisfy 1 <= a <= b <= " +
                                                  std::to_string(size));
    std::vector<std::size_t> out;
    for (std::size_t n = a; n <= b; ++n) out.push_back(n);
    return out;
}

IndexSet parse_track(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string_view part = std::string_view(text).substr(start, end - start);
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
            throw Error(ErrorCode::invalid_input, "field 'track' must be comma-separated indices, got '" + text + "'");
        out.push_back(v);
        start = end + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return IndexSet(std::move(out));
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

FrameFamily load_family(const std::string& path) {
    const Json j = io::read_json_file(path);
    try {
        return io::family_from_json(j);
    } catch (const Error& e) {
        throw Error(e.code(), e.message() + " in '" + path + "'");
    }
}

Json command_bounds(const Options& o) {
    const auto tol = o.common.policy();
    const FrameFamily f = load_family(o.input);
    Json j = header("bounds", o);
    j["dim"] = f.dim();
    j["size"] = f.size();
    const auto spectrum = frame_sequence_spectrum(f, tol);
    j["rank"] = spectrum.rank;
    j["spans"] = spectrum.rank == f.dim();
    const FrameBounds space = optimal_bounds(f, BoundsKind::frame_for_space, tol);
    j["lower"] = space.lower;
    j["upper"] = space.upper;
    j["frame_for_space"] = io::to_json(space);
    j["frame_sequence"] = io::to_json(optimal_bounds(f, BoundsKind::frame_sequence, tol));
    if (spectrum.rank == f.size())
        j["riesz_constants"] = io::to_json(optimal_bounds(f, BoundsKind::riesz_constants, tol));
    else
        j["riesz_constants"] = nullptr;
    return j;
}

Json command_dual(const Options& o) {
    const auto tol = o.common.policy();
    const FrameFamily f = load_family(o.input);
    Json j = header("dual", o);
    j["dual"] = io::to_json(dual_frame(f, tol));
    return j;
}

Json command_coeffs(const Options& o) {
    const auto tol = o.common.policy();
    const FrameFamily f = load_family(o.input);
    const Vector v = io::vector_from_json(io::read_json_file(o.vector_path));
    const auto c = frame_coefficients(f, v, tol);
    Json j = header("coeffs", o);
    j["vector_input"] = o.vector_path;
    j["coefficients"] = c;
    j["reconstruction_error"] = (synthesize(f, c) - v).norm();
    return j;
}

Json command_subframe(const Options& o) {
    const auto tol = o.common.policy();
    if (o.exhaustive && o.samples > 0)
        throw Error(ErrorCode::invalid_input, "--exhaustive and --samples are mutually exclusive");
    const FrameFamily f = load_family(o.input);
    const auto search = o.samples > 0 ? subframe::SubsetSearch::sampled(o.samples, o.common.seed)
                                      : subframe::SubsetSearch::exhaustive();
    Json j = header("subframe", o);
    j["mode"] = o.samples > 0 ? "sampled" : "exhaustive";
    if (o.samples > 0) {
        j["samples"] = o.samples;
        j["seed"] = o.common.seed;
    }
    j["report"] = io::to_json(subframe::riesz_frame_bound(f, search, tol));
    return j;
}

Json command_extract(const Options& o) {
    const auto tol = o.common.policy();
    const FrameFamily f = load_family(o.input);
    const auto basis = subframe::extract_riesz_basis(f, tol);
    const auto p = OrthoProjector::onto_span(f.subfamily(basis.indices), tol);
    const double residual = project_family(f, p, ProjectionSide::complement).matrix().cwiseAbs().maxCoeff();
    Json j = header("extract-basis", o);
    j["basis"] = io::to_json(basis);
    j["span_residual"] = residual;
    return j;
}

Json command_construct(const Options& o, bool seed_given) {
    auto spec = io::spec_from_json(io::read_json_file(o.input));
    if (seed_given) spec.seed = o.common.seed;
    return io::to_json(constructions::construct(spec));
}

std::string command_project(const Options& o) {
    const auto tol = o.common.policy();
    FrameFamily f = load_family(o.input);
    const Vector v = io::vector_from_json(io::read_json_file(o.vector_path));
    Json j = header("project", o);
    j["vector_input"] = o.vector_path;
    if (!o.permute.empty()) {
        const auto perm = all_digits(o.permute)
                              ? projection::Permutation::random(f.size(), std::stoull(o.permute))
                              : io::permutation_from_json(io::read_json_file(o.permute));
        f = projection::permute(f, perm);
        j["permutation"] = perm.order();
    }
    const auto levels = parse_levels(o.levels, f.size());
    const auto d = projection::diagnostics(f, v, levels, parse_track(o.track), tol);
    if (o.common.format == "csv") return io::diagnostics_csv(d);
    j["diagnostics"] = io::to_json(d);
    return io::dump(j);
}

int exit_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::degenerate_input:
        case ErrorCode::not_a_frame:
        case ErrorCode::not_linearly_independent: return degenerate;
        default: return usage_error;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical toolkit for frames, Riesz frames and projection methods"};
    app.name("framekit");
    app.require_subcommand(1);
    app.footer(std::string("Exit codes: 0 success, 1 property failure, 2 usage or malformed input, 3 numerical "
                           "degeneracy.\nCSV diagnostics columns (project --format csv): ") +
               kCsvColumns);

    Options o;
    bool seed_given = false;

    auto* bounds = app.add_subcommand("bounds", "optimal frame bounds of every kind");
    bounds->add_option("frame", o.input, "frame JSON file")->required();
    add_common(bounds, o.common, false);

    auto* dual = app.add_subcommand("dual", "canonical dual frame");
    dual->add_option("frame", o.input, "frame JSON file")->required();
    add_common(dual, o.common, false);

    auto* coeffs = app.add_subcommand("coeffs", "frame coefficients of a vector");
    coeffs->add_option("frame", o.input, "frame JSON file")->required();
    coeffs->add_option("--vector", o.vector_path, "vector JSON file")->required();
    add_common(coeffs, o.common, false);

    auto* sub = app.add_subcommand("subframe", "Riesz frame bounds over subsets");
    sub->add_option("frame", o.input, "frame JSON file")->required();
    sub->add_flag("--exhaustive", o.exhaustive, "enumerate every nonempty subset (default)");
    sub->add_option("--samples", o.samples, "sample N random subsets instead");
    add_common(sub, o.common, true);

    auto* extract = app.add_subcommand("extract-basis", "greedy Riesz basis inside a frame");
    extract->add_option("frame", o.input, "frame JSON file")->required();
    add_common(extract, o.common, false);

    auto* construct = app.add_subcommand("construct", "build a frame from a construction spec");
    construct->add_option("spec", o.input, "construction spec JSON file")->required();
    add_common(construct, o.common, true);

    auto* project = app.add_subcommand("project", "projection-method diagnostics");
    project->add_option("frame", o.input, "frame JSON file")->required();
    project->add_option("--vector", o.vector_path, "vector JSON file")->required();
    project->add_option("--levels", o.levels, "truncation levels a..b (default 1..N)");
    project->add_option("--permute", o.permute, "random permutation seed, or a permutation JSON file");
    project->add_option("--track", o.track, "comma-separated indices to track (default: all below the first level)");
    add_common(project, o.common, false);

    auto* verify = app.add_subcommand(
        "verify", "run a property battery: complements, projected-supports, block-bounds, subframe-recipe, "
                  "projection-order");
    verify->add_option("suite", o.suite, "suite name")
        ->required()
        ->check(CLI::IsMember(verify::suite_names()));
    verify->add_option("--trials", o.trials, "number of trials (default per suite)");
    add_common(verify, o.common, true);

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "framekit: " << e.what() << "\n";
        return usage_error;
    }
    for (auto* s : app.get_subcommands())
        if (auto* opt = s->get_option_no_throw("--seed"); opt != nullptr && opt->count() > 0) seed_given = true;

    try {
        CLI::App* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        if (o.common.format == "csv" && name != "project")
            throw Error(ErrorCode::invalid_input, "--format csv is only available for project");

        std::string text;
        int code = ok;
        if (name == "bounds") text = io::dump(command_bounds(o));
        else if (name == "dual") text = io::dump(command_dual(o));
        else if (name == "coeffs") text = io::dump(command_coeffs(o));
        else if (name == "subframe") text = io::dump(command_subframe(o));
        else if (name == "extract-basis") text = io::dump(command_extract(o));
        else if (name == "construct") text = io::dump(command_construct(o, seed_given));
        else if (name == "project") text = command_project(o);
        else if (name == "verify") {
            verify::SuiteOptions so;
            so.trials = o.trials;
            so.seed = o.common.seed;
            so.tol = o.common.policy();
            const auto report = verify::run_suite(o.suite, so);
            text = io::dump(report.report);
            if (!report.passed) code = property_failed;
            err << o.suite << ": " << (report.passed ? "PASS" : "FAIL") << " (" << report.cases << " cases, "
                << report.failures << " failures)\n";
        }

        if (o.common.out_path.empty()) out << text;
        else io::write_text_file(o.common.out_path, text);
        return code;
    } catch (const Error& e) {
        err << "framekit: " << e.what() << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "framekit: invalid-input: " << e.what() << "\n";
        return usage_error;
    }
}

}  // namespace framekit::cli
