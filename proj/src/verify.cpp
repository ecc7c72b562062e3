#include "framekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "framekit/error.hpp"

namespace framekit::verify {

namespace {

using io::Json;
using constructions::ConstructionKind;
using constructions::ConstructionSpec;

class Check {
public:
    Check(std::string name, std::string description) : name_(std::move(name)), description_(std::move(description)) {}

    // margin < 0 means the case failed; the smallest margin is kept as the witness.
    void record(bool ok, double margin, Json witness) {
        ++cases_;
        if (!ok) ++failures_;
        if (cases_ == 1 || margin < worst_margin_) {
            worst_margin_ = margin;
            worst_ = std::move(witness);
        }
    }
    void skip() { ++skipped_; }

    std::size_t cases() const { return cases_; }
    std::size_t failures() const { return failures_; }

    Json to_json() const {
        Json out{{"name", name_},   {"description", description_}, {"cases", cases_},
                 {"failures", failures_}, {"skipped", skipped_},     {"passed", failures_ == 0}};
        if (cases_ > 0) {
            out["worst_margin"] = worst_margin_;
            out["worst"] = worst_;
        }
        return out;
    }

private:
    std::string name_;
    std::string description_;
    std::size_t cases_ = 0;
    std::size_t failures_ = 0;
    std::size_t skipped_ = 0;
    double worst_margin_ = 0.0;
    Json worst_;
};

SuiteReport finish(std::string suite, const SuiteOptions& options, std::size_t trials, const std::vector<Check>& checks,
                   Json extra = Json::object()) {
    SuiteReport out;
    out.suite = std::move(suite);
    Json check_json = Json::array();
    for (const auto& c : checks) {
        out.cases += c.cases();
        out.failures += c.failures();
        check_json.push_back(c.to_json());
    }
    out.passed = out.failures == 0;
    Json tolerances = io::to_json(options.tol);
    tolerances["bound_slack"] = kBoundSlack;
    out.report = Json{{"suite", out.suite},        {"seed", options.seed},   {"trials", trials},
                      {"tolerances", tolerances},  {"checks", check_json}};
    for (auto& [key, value] : extra.items()) out.report[key] = value;
    out.report["cases"] = out.cases;
    out.report["failures"] = out.failures;
    out.report["passed"] = out.passed;
    return out;
}

std::size_t trials_or_default(const SuiteOptions& options, std::string_view suite) {
    return options.trials > 0 ? options.trials : default_trials(suite);
}

RngStream trial_stream(const SuiteOptions& options, std::uint64_t tag, std::size_t trial) {
    return RngStream(CounterRng(options.seed).split(tag).split(trial));
}

double frame_lower(const FrameFamily& f, BoundsKind kind, const TolerancePolicy& tol) {
    return optimal_bounds(f, kind, tol).lower;
}

std::vector<std::size_t> random_subset(RngStream& rng, std::size_t universe, std::size_t count) {
    std::vector<std::size_t> all(universe);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng.below(universe - i)]);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

Json spec_json(const ConstructionSpec& spec) { return io::to_json(spec); }

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"complements", "projected-supports", "block-bounds",
                                                "subframe-recipe", "projection-order"};
    return names;
}

std::size_t default_trials(std::string_view suite) {
    if (suite == "complements") return 200;
    if (suite == "projected-supports") return 40;
    if (suite == "block-bounds") return 40;
    if (suite == "subframe-recipe") return 30;
    if (suite == "projection-order") return 20;
    throw Error(ErrorCode::invalid_input, "unknown suite '" + std::string(suite) + "'");
}

SuiteReport run_suite(std::string_view suite, const SuiteOptions& options) {
    options.tol.validate();
    if (suite == "complements") return complements(options);
    if (suite == "projected-supports") return projected_supports(options);
    if (suite == "block-bounds") return block_bounds(options);
    if (suite == "subframe-recipe") return subframe_recipe(options);
    if (suite == "projection-order") return projection_order(options);
    throw Error(ErrorCode::invalid_input, "unknown suite '" + std::string(suite) +
                                              "'; expected one of complements, projected-supports, block-bounds, "
                                              "subframe-recipe, projection-order");
}

Matrix gaussian_matrix(RngStream& rng, std::size_t rows, std::size_t cols) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.normal();
    return m;
}

Matrix random_orthogonal(RngStream& rng, std::size_t dim) {
    for (;;) {
        const auto q = linalg::orthonormalize(FrameFamily(gaussian_matrix(rng, dim, dim)));
        if (q.basis.size() == dim) return q.basis.matrix();
    }
}

ConstructionSpec random_block_spec(RngStream& rng, std::size_t max_dim, std::size_t max_size) {
    ConstructionSpec spec;
    spec.kind = ConstructionKind::block_riesz;
    spec.dim = rng.between(4, std::max<std::size_t>(4, max_dim));
    spec.k = rng.between(1, 2);
    const std::size_t scale = std::size_t{1} << (spec.k - 1);
    // Supports must stay below the full-support cut of 0.9 * dim.
    std::size_t max_K = std::min<std::size_t>(spec.dim, 4);
    while (static_cast<double>(max_K) >= subframe::kDefaultSupportFraction * static_cast<double>(spec.dim)) --max_K;
    spec.K = rng.between(scale, std::max(scale, max_K));
    const std::size_t run = spec.K / scale;
    std::size_t n_h = rng.between(1, std::max<std::size_t>(1, spec.dim / run));
    auto family_size = [&](std::size_t nh) {
        std::size_t total = spec.dim, level = nh;
        for (std::size_t i = 0; i < spec.k; ++i) {
            total += level;
            level = (level + 1) / 2;
        }
        return total;
    };
    while (n_h > 1 && family_size(n_h) > max_size) --n_h;
    spec.n_h = n_h;
    spec.A = rng.uniform(0.1, 1.0);
    spec.B = rng.uniform(spec.A, 1.0);
    spec.seed = rng.below(std::numeric_limits<std::uint32_t>::max());
    return spec;
}

ConstructionSpec random_recipe_spec(RngStream& rng, std::size_t n_k, std::size_t max_dim) {
    ConstructionSpec spec;
    spec.kind = ConstructionKind::subframe_recipe;
    spec.dim = rng.between(6, std::max<std::size_t>(6, max_dim));
    spec.m = rng.between(0, 2);
    spec.k = 1;
    spec.K = rng.between(1, 3);
    spec.n_h = rng.between(1, std::min<std::size_t>(4, (spec.dim - spec.m) / spec.K));
    spec.n_k = n_k;
    spec.A = rng.uniform(0.25, 1.0);
    spec.B = rng.uniform(spec.A, 1.0);
    spec.h2_decay = rng.uniform(0.3, 0.7);
    spec.tail_decay = rng.uniform(0.45, 0.7);
    spec.seed = rng.below(std::numeric_limits<std::uint32_t>::max());
    return spec;
}

projection::Permutation k_first_order(const subframe::SubframeDecomposition& d, std::size_t size) {
    std::vector<std::size_t> order;
    std::vector<bool> used(size, false);
    for (const IndexSet* part : {&d.k, &d.g, &d.h})
        for (std::size_t i : *part) {
            order.push_back(i);
            used.at(i) = true;
        }
    for (std::size_t i = 0; i < size; ++i)
        if (!used[i]) order.push_back(i);
    return projection::Permutation(std::move(order));
}

subframe::SubsetSearch search_for(std::size_t family_size, std::uint64_t seed) {
    if (family_size <= 14) return subframe::SubsetSearch::exhaustive();
    return subframe::SubsetSearch::sampled(4096, seed);
}

SuiteReport complements(const SuiteOptions& options) {
    const std::size_t trials = trials_or_default(options, "complements");
    const auto& tol = options.tol;
    Check union_check("union_lower_bound",
                      "family whose span part has lower bound A1 and whose complement-projected rest has lower "
                      "bound A2 is a frame with lower bound >= A1*A2/(8B)");
    Check complement_lower("complement_lower_bound",
                           "complement projection of the remaining vectors of a frame keeps lower bound >= A");
    Check complement_upper("complement_upper_bound",
                           "complement projection of the remaining vectors of a frame keeps upper bound <= B");
    double min_ratio = std::numeric_limits<double>::infinity();

    for (std::size_t t = 0; t < trials; ++t) {
        {
            RngStream rng = trial_stream(options, 0x2301, t);
            const std::size_t d = rng.between(2, 8);
            const std::size_t r = rng.between(1, d - 1);
            const Matrix q = random_orthogonal(rng, d);
            const std::size_t n_span = r + rng.below(3);
            const std::size_t n_rest = (d - r) + rng.below(3);
            const FrameFamily span_part(q.leftCols(static_cast<Eigen::Index>(r)) * gaussian_matrix(rng, r, n_span));
            const FrameFamily rest(gaussian_matrix(rng, d, n_rest));
            const FrameFamily all = span_part.concat(rest);
            const auto p = OrthoProjector::onto_span(span_part, tol);
            const FrameFamily projected = project_family(rest, p, ProjectionSide::complement);
            if (frame_sequence_spectrum(projected, tol).rank < d - r) {
                union_check.skip();
            } else {
                const double a1 = frame_lower(span_part, BoundsKind::frame_sequence, tol);
                const double a2 = frame_lower(projected, BoundsKind::frame_sequence, tol);
                const FrameBounds whole = optimal_bounds(all, BoundsKind::frame_for_space, tol);
                const double bound = a1 * a2 / (8.0 * whole.upper);
                const double ratio = whole.lower / bound;
                min_ratio = std::min(min_ratio, ratio);
                union_check.record(whole.lower >= bound - kBoundSlack, whole.lower - bound,
                                   Json{{"trial", t}, {"dim", d}, {"span_rank", r}, {"A1", a1}, {"A2", a2},
                                        {"B", whole.upper}, {"bound", bound}, {"measured_lower", whole.lower},
                                        {"ratio", ratio}});
            }
        }
        {
            RngStream rng = trial_stream(options, 0x2302, t);
            const std::size_t d = rng.between(2, 8);
            const std::size_t n = d + rng.below(5);
            const FrameFamily f(gaussian_matrix(rng, d, n));
            const FrameBounds bounds = optimal_bounds(f, BoundsKind::frame_for_space, tol);
            if (bounds.lower <= 1e-10) {
                complement_lower.skip();
                complement_upper.skip();
                continue;
            }
            const IndexSet delta(random_subset(rng, n, rng.between(1, d - 1)));
            const auto p = OrthoProjector::onto_span(f.subfamily(delta), tol);
            const FrameFamily projected =
                project_family(f.subfamily(delta.complement(n)), p, ProjectionSide::complement);
            const FrameBounds got = optimal_bounds(projected, BoundsKind::frame_sequence, tol);
            const Json witness{{"trial", t},          {"dim", d},
                               {"size", n},           {"delta", io::to_json(delta)},
                               {"A", bounds.lower},   {"B", bounds.upper},
                               {"measured_lower", got.lower}, {"measured_upper", got.upper}};
            complement_lower.record(got.lower >= bounds.lower - kBoundSlack, got.lower - bounds.lower, witness);
            complement_upper.record(got.upper <= bounds.upper + kBoundSlack, bounds.upper - got.upper, witness);
        }
    }
    return finish("complements", options, trials, {union_check, complement_lower, complement_upper},
                  Json{{"min_union_ratio", min_ratio}});
}

SuiteReport projected_supports(const SuiteOptions& options) {
    const std::size_t trials = trials_or_default(options, "projected-supports");
    const auto& tol = options.tol;
    Check a0_check("projected_lower_bound",
                   "sampled lower bound A0 of natural projections of h subsets is >= the Riesz frame lower bound");
    Check window_check("coefficient_window",
                       "every nonzero basis coefficient of an h vector has square within the Riesz frame bounds");
    Check support_check("support_size", "every h vector has at most K nonzero basis coefficients");
    Check class_check("classification", "support classification recovers the g/h split with no full-support vectors");

    for (std::size_t t = 0; t < trials; ++t) {
        RngStream rng = trial_stream(options, 0x2401, t);
        const ConstructionSpec spec = random_block_spec(rng);
        const auto built = constructions::make_block_riesz(spec);
        const auto riesz = subframe::riesz_frame_bound(built.family, search_for(built.family.size(), spec.seed), tol);
        const auto report = subframe::sample_projected_supports(built.family, built.ground_truth, 32, spec.seed, tol);
        const Json witness{{"trial", t}, {"spec", spec_json(spec)},
                           {"riesz_lower", riesz.riesz_lower}, {"riesz_upper", riesz.riesz_upper},
                           {"empirical_a0", report.empirical_a0}, {"worst_delta", io::to_json(report.worst_delta)},
                           {"worst_gamma", io::to_json(report.worst_gamma)},
                           {"coefficient_min", report.coefficient_min}, {"coefficient_max", report.coefficient_max},
                           {"max_support", report.max_support}};
        a0_check.record(report.empirical_a0 >= riesz.riesz_lower - kBoundSlack,
                        report.empirical_a0 - riesz.riesz_lower, witness);
        const FrameBounds rb{riesz.riesz_lower, riesz.riesz_upper, BoundsKind::frame_sequence};
        const double window_margin =
            std::min(report.coefficient_min * report.coefficient_min - rb.lower,
                     rb.upper - report.coefficient_max * report.coefficient_max);
        window_check.record(subframe::coefficient_window_holds(report, rb), window_margin, witness);
        support_check.record(report.max_support <= spec.K,
                             static_cast<double>(spec.K) - static_cast<double>(report.max_support), witness);
        const auto found = subframe::classify_supports(built.family, built.ground_truth.g, {}, tol);
        const bool same = found.h == built.ground_truth.h && found.k.empty() && found.m0 == 0;
        class_check.record(same, same ? 0.0 : -1.0,
                           Json{{"trial", t}, {"spec", spec_json(spec)}, {"h", io::to_json(found.h)},
                                {"k", io::to_json(found.k)}, {"m0", found.m0}});
    }
    return finish("projected-supports", options, trials, {a0_check, window_check, support_check, class_check});
}

SuiteReport block_bounds(const SuiteOptions& options) {
    const std::size_t trials = trials_or_default(options, "block-bounds");
    const auto& tol = options.tol;
    Check closed_form("closed_form", "guaranteed bounds equal (1/16, 2) for k=1,K=1,A=B=1 and (1/48, 3) for K=2");
    Check lower_check("measured_lower", "exhaustive Riesz frame lower bound >= guaranteed lower bound");
    Check upper_check("measured_upper", "exhaustive Riesz frame upper bound <= guaranteed upper bound + slack");

    for (const auto& [K, lower, upper] : {std::tuple{1, 1.0 / 16.0, 2.0}, std::tuple{2, 1.0 / 48.0, 3.0}}) {
        const auto g = constructions::guaranteed_bounds(1, static_cast<std::size_t>(K), 1.0, 1.0);
        const double err = std::max(std::abs(g.lower - lower), std::abs(g.upper - upper));
        closed_form.record(err <= 1e-15, -err,
                           Json{{"k", 1}, {"K", K}, {"lower", g.lower}, {"upper", g.upper},
                                {"expected_lower", lower}, {"expected_upper", upper}});
    }
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream rng = trial_stream(options, 0x2601, t);
        const ConstructionSpec spec = random_block_spec(rng);
        const auto built = constructions::make_block_riesz(spec);
        const auto riesz = subframe::riesz_frame_bound(built.family, search_for(built.family.size(), spec.seed), tol);
        const auto& g = *built.guaranteed;
        const Json witness{{"trial", t}, {"spec", spec_json(spec)},
                           {"riesz_lower", riesz.riesz_lower}, {"riesz_upper", riesz.riesz_upper},
                           {"guaranteed_lower", g.lower}, {"guaranteed_upper", g.upper},
                           {"worst_subset", io::to_json(riesz.worst.subset)}};
        lower_check.record(riesz.riesz_lower >= g.lower, riesz.riesz_lower - g.lower, witness);
        upper_check.record(riesz.riesz_upper <= g.upper + kBoundSlack, g.upper - riesz.riesz_upper, witness);
    }
    return finish("block-bounds", options, trials, {closed_form, lower_check, upper_check});
}

SuiteReport subframe_recipe(const SuiteOptions& options) {
    const std::size_t trials = trials_or_default(options, "subframe-recipe");
    const auto& tol = options.tol;
    Check k_check("full_support_count", "classification flags exactly the full-support vectors as k");
    Check split_check("h_split", "h = h1 + h2 with h2 inside G and h1 orthogonal to G");
    Check energy_check("h2_energy", "sum of ||h2||^2 is at most dim(G) times the upper frame bound");
    Check riesz_check("riesz_part", "basis plus h1 parts has a positive Riesz frame lower bound");
    Check subframe_check("subframe_property",
                         "without full-support vectors, every examined subset is a frame sequence with lower "
                         "bound > 1e-12");
    Check energy_bound_check("projected_energy", "sum ||P f_i||^2 <= rank(P) * B for random frames and coordinate projectors");
    Check window_check("failing_column_window", "designated column sums lie strictly inside (0, 1/m)");
    Check witness_check("failing_witness", "designed subset lower bound is below 1/m_max");
    Check trend_check("failing_trend", "designed subset lower bound strictly decreases as m_max grows");

    for (std::size_t t = 0; t < trials; ++t) {
        RngStream rng = trial_stream(options, 0x3201, t);
        const std::size_t n_k = t % 4;
        const ConstructionSpec spec = random_recipe_spec(rng, n_k);
        const auto built = constructions::make_subframe_frame(spec);
        const FrameFamily& f = built.family;
        const auto found = subframe::classify_supports(f, built.ground_truth.g, {}, tol);
        const Json base{{"trial", t}, {"spec", spec_json(spec)}};

        const bool k_ok = found.k == built.ground_truth.k;
        Json kw = base;
        kw["classified_k"] = io::to_json(found.k);
        k_check.record(k_ok, k_ok ? 0.0 : -1.0, kw);

        double leak = 0.0;
        const auto m0 = static_cast<Eigen::Index>(found.m0);
        for (const auto& [h1, h2] : found.h_split) {
            if (m0 > 0) leak = std::max(leak, h1.head(m0).cwiseAbs().maxCoeff());
            if (m0 < h2.size()) leak = std::max(leak, h2.tail(h2.size() - m0).cwiseAbs().maxCoeff());
        }
        Json sw = base;
        sw["m0"] = found.m0;
        sw["max_leak"] = leak;
        split_check.record(leak <= 1e-12, 1e-12 - leak, sw);

        const double upper = optimal_bounds(f, BoundsKind::frame_for_space, tol).upper;
        const double cap = static_cast<double>(found.m0) * upper;
        Json ew = base;
        ew["h2_energy"] = found.h2_energy;
        ew["cap"] = cap;
        energy_check.record(found.h2_energy <= cap + kBoundSlack, cap - found.h2_energy, ew);

        Matrix riesz_part(f.matrix().rows(), static_cast<Eigen::Index>(found.g.size() + found.h_split.size()));
        Eigen::Index col = 0;
        for (std::size_t i : found.g) riesz_part.col(col++) = f.matrix().col(static_cast<Eigen::Index>(i));
        for (const auto& [h1, h2] : found.h_split) riesz_part.col(col++) = h1;
        const FrameFamily rp(std::move(riesz_part));
        const auto rr = subframe::riesz_frame_bound(rp, search_for(rp.size(), spec.seed), tol);
        Json rw = base;
        rw["riesz_lower"] = rr.riesz_lower;
        rw["exhaustive"] = rr.exhaustive;
        riesz_check.record(rr.riesz_lower > 1e-10, rr.riesz_lower - 1e-10, rw);

        if (n_k == 0) {
            const auto full = subframe::riesz_frame_bound(f, search_for(f.size(), spec.seed), tol);
            Json fw = base;
            fw["lower"] = full.riesz_lower;
            fw["worst_subset"] = io::to_json(full.worst.subset);
            fw["exhaustive"] = full.exhaustive;
            subframe_check.record(full.riesz_lower > 1e-12, full.riesz_lower - 1e-12, fw);
        }

        RngStream lr = trial_stream(options, 0x3101, t);
        const std::size_t d = lr.between(2, 10);
        const FrameFamily random_frame(gaussian_matrix(lr, d, d + lr.below(7)));
        const IndexSet coords(random_subset(lr, d, lr.between(1, d)));
        const double energy = projected_energy(random_frame, OrthoProjector::coordinate(d, coords));
        const double bound =
            static_cast<double>(coords.size()) * optimal_bounds(random_frame, BoundsKind::frame_for_space, tol).upper;
        energy_bound_check.record(energy <= bound + kBoundSlack, bound - energy,
                           Json{{"trial", t}, {"dim", d}, {"coords", io::to_json(coords)}, {"energy", energy},
                                {"bound", bound}});
    }

    double previous = std::numeric_limits<double>::infinity();
    std::size_t previous_m = 0;
    for (const auto& [dim, m] : {std::pair<std::size_t, std::size_t>{8, 2}, {8, 4}, {16, 8}}) {
        ConstructionSpec spec;
        spec.kind = ConstructionKind::failing_family;
        spec.dim = dim;
        spec.m = m;
        spec.tail_decay = 0.7;
        spec.seed = options.seed;
        const auto built = constructions::make_failing_family(spec);
        const auto& df = *built.designed_failure;
        for (std::size_t j = 0; j < df.column_sums.size(); ++j) {
            const double s = df.column_sums[j];
            const double cap = 1.0 / static_cast<double>(j + 1);
            window_check.record(s > 0.0 && s < cap, std::min(s, cap - s),
                                Json{{"dim", dim}, {"m_max", m}, {"column", j + 1}, {"sum", s}});
        }
        witness_check.record(df.measured_lower < df.bound_ceiling, df.bound_ceiling - df.measured_lower,
                             Json{{"dim", dim}, {"m_max", m}, {"measured_lower", df.measured_lower},
                                  {"ceiling", df.bound_ceiling}});
        if (previous_m > 0)
            trend_check.record(df.measured_lower < previous, previous - df.measured_lower,
                               Json{{"m_max", m}, {"previous_m_max", previous_m}, {"lower", df.measured_lower},
                                    {"previous_lower", previous}});
        previous = df.measured_lower;
        previous_m = m;
    }
    return finish("subframe-recipe", options, trials,
                  {k_check, split_check, energy_check, riesz_check, subframe_check, energy_bound_check, window_check,
                   witness_check, trend_check});
}

namespace {

constexpr std::size_t kPermutations = 20;
constexpr double kFinalErrorCap = 1e-8;

struct PermutationChecks {
    Check final_error;
    Check error_trend;
    Check dual_ratio;

    explicit PermutationChecks(const std::string& prefix)
        : final_error(prefix + "final_l2_error", "final-level l2 error <= 1e-8 under every permutation"),
          error_trend(prefix + "l2_error_trend", "fitted log-slope of l2 errors <= 0 under every permutation"),
          dual_ratio(prefix + "dual_norm_ratio",
                     "max/min of dual norms across levels <= U/L, the Riesz frame bound ratio of the family") {}

    // Every prefix is a subfamily, so each truncated operator has spectrum in [L, U].
    void run(const FrameFamily& f, const Vector& v, const CounterRng& seeds, const Json& base,
             const TolerancePolicy& tol) {
        const auto riesz = subframe::riesz_frame_bound(f, search_for(f.size(), seeds.bits(kPermutations)), tol);
        const double cap = riesz.riesz_upper / riesz.riesz_lower * (1.0 + 1e-9);
        std::vector<std::size_t> levels(f.size());
        std::iota(levels.begin(), levels.end(), std::size_t{1});
        for (std::size_t p = 0; p < kPermutations; ++p) {
            const auto perm = projection::Permutation::random(f.size(), seeds.bits(p));
            const auto d = projection::diagnostics(projection::permute(f, perm), v, levels, {}, tol);
            const double last = d.l2_errors.back();
            const auto [lo, hi] = std::minmax_element(d.dual_norms.begin(), d.dual_norms.end());
            const double ratio = *hi / *lo;
            Json w = base;
            w["permutation"] = perm.order();
            w["final_l2_error"] = last;
            w["l2_trend"] = d.trend.l2_error;
            w["dual_ratio"] = ratio;
            w["dual_ratio_cap"] = cap;
            final_error.record(last <= kFinalErrorCap, kFinalErrorCap - last, w);
            error_trend.record(d.trend.l2_error <= 0.0, -d.trend.l2_error, w);
            dual_ratio.record(ratio <= cap, (cap - ratio) / cap, w);
        }
    }
};

}  // namespace

SuiteReport projection_order(const SuiteOptions& options) {
    const std::size_t trials = trials_or_default(options, "projection-order");
    const auto& tol = options.tol;
    PermutationChecks plain("");
    PermutationChecks trimmed("trimmed_");
    Check growth("k_dual_norm_growth",
                 "with full-support vectors first, dual norms on them have positive fitted log-slope");
    Check removed("trimmed_count", "trimming removes exactly the full-support vectors");

    for (std::size_t t = 0; t < trials; ++t) {
        RngStream rng = trial_stream(options, 0x4101, t);
        const std::size_t n_k = t % 3;
        const ConstructionSpec spec = random_recipe_spec(rng, n_k, 10);
        const auto built = constructions::make_subframe_frame(spec);
        const FrameFamily& f = built.family;
        const Vector v = gaussian_matrix(rng, spec.dim, 1).col(0);
        const auto found = subframe::classify_supports(f, built.ground_truth.g, {}, tol);
        const CounterRng seeds = CounterRng(options.seed).split(0x4102).split(t);
        const Json base{{"trial", t}, {"spec", spec_json(spec)}};

        if (found.k.empty()) {
            plain.run(f, v, seeds, base, tol);
        } else {
            const auto pf = projection::permute(f, k_first_order(found, f.size()));
            std::vector<std::size_t> levels;
            for (std::size_t n = found.k.size(); n < found.k.size() + spec.dim; ++n) levels.push_back(n);
            const auto d = projection::diagnostics(pf, v, levels, IndexSet::range(0, found.k.size()), tol);
            Json w = base;
            w["levels"] = d.levels;
            w["dual_norms"] = d.dual_norms;
            w["slope"] = d.trend.max_dual_norm;
            growth.record(d.trend.max_dual_norm > 0.0, d.trend.max_dual_norm, w);
        }

        const auto [tf, gone] = projection::trim_for_strong_method(f, found);
        Json rw = base;
        rw["removed"] = io::to_json(gone);
        removed.record(gone == built.ground_truth.k, gone == built.ground_truth.k ? 0.0 : -1.0, rw);
        trimmed.run(tf, v, seeds.split(1), base, tol);
    }
    return finish("projection-order", options, trials,
                  {plain.final_error, plain.error_trend, plain.dual_ratio, growth, removed,
                   trimmed.final_error, trimmed.error_trend, trimmed.dual_ratio});
}

}  // namespace framekit::verify
