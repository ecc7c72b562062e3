#include "framekit/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "framekit/error.hpp"
#include "framekit/rng.hpp"

namespace framekit::constructions {

std::string_view to_string(ConstructionKind kind) noexcept {
    switch (kind) {
        case ConstructionKind::onb: return "onb";
        case ConstructionKind::block_riesz: return "block_riesz";
        case ConstructionKind::subframe_recipe: return "subframe_recipe";
        case ConstructionKind::failing_family: return "failing_family";
    }
    return "unknown";
}

ConstructionKind construction_kind_from_string(std::string_view name) {
    if (name == "onb") return ConstructionKind::onb;
    if (name == "block_riesz") return ConstructionKind::block_riesz;
    if (name == "subframe_recipe") return ConstructionKind::subframe_recipe;
    if (name == "failing_family") return ConstructionKind::failing_family;
    throw Error(ErrorCode::invalid_input, "unknown construction kind '" + std::string(name) + "'");
}

void ConstructionSpec::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_input, what); };
    if (dim == 0) fail("dim must be at least 1");
    if (kind == ConstructionKind::onb) return;
    if (k == 0) fail("k must be at least 1");
    if (K == 0) fail("K must be at least 1");
    if (K > dim) fail("K must not exceed dim");
    if (!(A > 0.0 && A <= B && std::isfinite(B))) fail("need 0 < A <= B");
    if (!(h2_decay > 0.0 && h2_decay < 1.0)) fail("h2_decay must lie in (0, 1)");
    if (!(tail_decay > 0.0 && tail_decay < 1.0)) fail("tail_decay must lie in (0, 1)");
    if (m >= dim) fail("m must be smaller than dim");
}

GuaranteedBounds guaranteed_bounds(std::size_t k, std::size_t K, double A, double B) {
    if (k == 0 || K == 0 || !(A > 0.0 && A <= B))
        throw Error(ErrorCode::invalid_input, "guaranteed bounds need k, K >= 1 and 0 < A <= B");
    GuaranteedBounds g;
    g.D = static_cast<double>(K) * B / A;
    double denominator = 1.0;
    for (std::size_t i = 1; i <= k; ++i) denominator *= g.D * 8.0 * (1.0 + static_cast<double>(i) * g.D);
    g.lower = 1.0 / denominator;
    g.upper = 1.0 + static_cast<double>(k) * g.D;
    return g;
}

namespace {

constexpr double kWindowSlack = 1e-12;

[[noreturn]] void infeasible(const std::string& what) { throw Error(ErrorCode::infeasible_spec, what); }
[[noreturn]] void verification_failed(const std::string& what) {
    throw Error(ErrorCode::infeasible_spec, "post-construction check failed: " + what);
}

Matrix identity_columns(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Matrix::Identity(n, n);
}

struct BlockLevels {
    std::vector<Matrix> levels;  // each dim x n_level
};

// Level vectors over coordinates [offset, dim). Level 1 uses positive
// magnitudes drawn from [sqrt(A), sqrt(B)]; higher levels combine pairs
// with random signs so magnitudes stay inside the window.
BlockLevels build_blocks(const ConstructionSpec& spec, std::size_t offset) {
    const std::size_t scale = std::size_t{1} << (spec.k - 1);
    const std::size_t run = spec.K / scale;
    if (run == 0)
        infeasible("K = " + std::to_string(spec.K) + " cannot host " + std::to_string(spec.k) +
                   " nested levels; need K >= " + std::to_string(scale));
    if (spec.n_h == 0) infeasible("n_h must be at least 1");
    const std::size_t region = spec.dim - offset;
    const std::size_t slot = region / spec.n_h;
    if (slot < run)
        infeasible("not enough dimensions for " + std::to_string(spec.n_h) + " blocks of " + std::to_string(run) +
                   " coordinates; required minimum dim is " + std::to_string(offset + spec.n_h * run));

    const CounterRng rng = CounterRng(spec.seed).split(0xb10c);
    const double lo = std::sqrt(spec.A);
    const double hi = std::sqrt(spec.B);
    const auto dim = static_cast<Eigen::Index>(spec.dim);

    BlockLevels out;
    Matrix level1 = Matrix::Zero(dim, static_cast<Eigen::Index>(spec.n_h));
    const CounterRng magnitudes = rng.split(1);
    for (std::size_t j = 0; j < spec.n_h; ++j) {
        const std::size_t first = offset + (j + 1) * slot - run;
        for (std::size_t c = first; c < first + run; ++c)
            level1(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = magnitudes.uniform(c, lo, hi);
    }
    out.levels.push_back(std::move(level1));

    for (std::size_t level = 2; level <= spec.k; ++level) {
        const Matrix& below = out.levels.back();
        const auto count = static_cast<std::size_t>(below.cols());
        const std::size_t next = (count + 1) / 2;
        const CounterRng signs = rng.split(level);
        Matrix combined = Matrix::Zero(dim, static_cast<Eigen::Index>(next));
        for (std::size_t j = 0; j < next; ++j) {
            combined.col(static_cast<Eigen::Index>(j)) = below.col(static_cast<Eigen::Index>(2 * j));
            if (2 * j + 1 < count) {
                const double sign = (signs.bits(j) & 1U) ? -1.0 : 1.0;
                combined.col(static_cast<Eigen::Index>(j)) += sign * below.col(static_cast<Eigen::Index>(2 * j + 1));
            }
        }
        out.levels.push_back(std::move(combined));
    }
    return out;
}

void verify_blocks(const ConstructionSpec& spec, const BlockLevels& blocks) {
    const double lo = spec.A * (1.0 - kWindowSlack);
    const double hi = spec.B * (1.0 + kWindowSlack);
    for (std::size_t level = 0; level < blocks.levels.size(); ++level) {
        const Matrix& vs = blocks.levels[level];
        std::vector<int> owner(spec.dim, -1);
        for (Eigen::Index j = 0; j < vs.cols(); ++j) {
            std::size_t support = 0;
            for (Eigen::Index c = 0; c < vs.rows(); ++c) {
                const double x = vs(c, j);
                if (x == 0.0) continue;
                ++support;
                if (x * x < lo || x * x > hi)
                    verification_failed("coordinate magnitude outside [A, B] at level " + std::to_string(level + 1));
                if (owner[static_cast<std::size_t>(c)] >= 0)
                    verification_failed("level " + std::to_string(level + 1) + " vectors overlap");
                owner[static_cast<std::size_t>(c)] = static_cast<int>(j);
            }
            if (support == 0 || support > spec.K)
                verification_failed("support size " + std::to_string(support) + " outside [1, K]");
        }
        if (level > 0) {
            // Nested spans: every vector of this level lies in the span of the level below.
            const auto below = linalg::orthonormalize(FrameFamily(blocks.levels[level - 1]));
            const Matrix& q = below.basis.matrix();
            const double residual = (vs - q * (q.transpose() * vs)).cwiseAbs().maxCoeff();
            if (residual > 1e-10) verification_failed("level spans are not nested");
        }
    }
}

std::vector<std::string> labels_with(const std::string& role, std::size_t count, std::size_t first = 0) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(role + ":" + std::to_string(first + i));
    return out;
}

Matrix stack_levels(const BlockLevels& blocks, std::size_t dim) {
    Eigen::Index total = 0;
    for (const auto& l : blocks.levels) total += l.cols();
    Matrix out(static_cast<Eigen::Index>(dim), total);
    Eigen::Index col = 0;
    for (const auto& l : blocks.levels) {
        out.middleCols(col, l.cols()) = l;
        col += l.cols();
    }
    return out;
}

}  // namespace

ConstructedFrame make_onb(std::size_t dim) {
    if (dim == 0) throw Error(ErrorCode::invalid_input, "dim must be at least 1");
    ConstructedFrame out;
    out.spec.kind = ConstructionKind::onb;
    out.spec.dim = dim;
    out.family = FrameFamily(identity_columns(dim), labels_with("g", dim));
    out.ground_truth.g = IndexSet::range(0, dim);
    out.guaranteed = GuaranteedBounds{0.0, 1.0, 1.0};
    return out;
}

ConstructedFrame make_block_riesz(const ConstructionSpec& spec) {
    spec.validate();
    if (spec.kind != ConstructionKind::block_riesz)
        throw Error(ErrorCode::invalid_input, "make_block_riesz needs kind block_riesz");
    const BlockLevels blocks = build_blocks(spec, 0);
    verify_blocks(spec, blocks);

    const Matrix hs = stack_levels(blocks, spec.dim);
    const auto nh = static_cast<std::size_t>(hs.cols());
    Matrix all(static_cast<Eigen::Index>(spec.dim), static_cast<Eigen::Index>(spec.dim + nh));
    all << identity_columns(spec.dim), hs;
    auto labels = labels_with("g", spec.dim);
    for (auto& l : labels_with("h", nh)) labels.push_back(std::move(l));

    ConstructedFrame out;
    out.spec = spec;
    out.family = FrameFamily(std::move(all), std::move(labels));
    out.ground_truth.g = IndexSet::range(0, spec.dim);
    out.ground_truth.h = IndexSet::range(spec.dim, spec.dim + nh);
    for (std::size_t t = 0; t < nh; ++t) {
        const Vector h = hs.col(static_cast<Eigen::Index>(t));
        out.ground_truth.h_supports.push_back(subframe::support_of(h));
        out.ground_truth.h_split.emplace_back(h, Vector::Zero(h.size()));
    }
    out.guaranteed = guaranteed_bounds(spec.k, spec.K, spec.A, spec.B);
    return out;
}

namespace {

// Sign pattern of the i-th full-support vector: constant, alternating, alternating in pairs.
double tail_sign(std::size_t i, std::size_t j) {
    switch (i % 3) {
        case 0: return 1.0;
        case 1: return (j % 2 == 0) ? 1.0 : -1.0;
        default: return ((j / 2) % 2 == 0) ? 1.0 : -1.0;
    }
}

}  // namespace

ConstructedFrame make_subframe_frame(const ConstructionSpec& spec) {
    spec.validate();
    if (spec.kind != ConstructionKind::subframe_recipe)
        throw Error(ErrorCode::invalid_input, "make_subframe_frame needs kind subframe_recipe");
    if (spec.n_k > 3) infeasible("at most 3 full-support vectors are supported, got " + std::to_string(spec.n_k));
    if (spec.n_k > 1 && spec.dim < 4) infeasible("independent full-support vectors need dim >= 4");
    const double full_support = subframe::kDefaultSupportFraction * static_cast<double>(spec.dim);
    const std::size_t h_support = spec.K + (spec.m > 0 ? 1 : 0);
    if (static_cast<double>(h_support) >= full_support)
        infeasible("h vectors may reach " + std::to_string(h_support) +
                   " coordinates, which is not below the full-support cut of " + std::to_string(full_support));

    const BlockLevels blocks = build_blocks(spec, spec.m);
    verify_blocks(spec, blocks);
    const Matrix block_part = stack_levels(blocks, spec.dim);
    const auto nh = static_cast<std::size_t>(block_part.cols());
    const auto dim = static_cast<Eigen::Index>(spec.dim);

    Matrix perturbation = Matrix::Zero(dim, static_cast<Eigen::Index>(nh));
    if (spec.m > 0)
        for (std::size_t t = 0; t < nh; ++t)
            perturbation(static_cast<Eigen::Index>(t % spec.m), static_cast<Eigen::Index>(t)) =
                std::pow(spec.h2_decay, static_cast<double>(t + 1));

    Matrix tails(dim, static_cast<Eigen::Index>(spec.n_k));
    for (std::size_t i = 0; i < spec.n_k; ++i) {
        for (std::size_t j = 0; j < spec.dim; ++j)
            tails(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                tail_sign(i, j) * std::pow(spec.tail_decay, static_cast<double>(j));
        tails.col(static_cast<Eigen::Index>(i)).normalize();
        const double smallest = tails.col(static_cast<Eigen::Index>(i)).cwiseAbs().minCoeff();
        if (smallest <= 100.0 * subframe::kDefaultCoordTol)
            infeasible("tail_decay " + std::to_string(spec.tail_decay) + " drives full-support coordinates to " +
                       std::to_string(smallest) + ", indistinguishable from zero");
    }

    const Matrix hs = block_part + perturbation;
    Matrix all(dim, dim + static_cast<Eigen::Index>(nh + spec.n_k));
    all << identity_columns(spec.dim), hs, tails;
    auto labels = labels_with("g", spec.dim);
    for (auto& l : labels_with("h", nh)) labels.push_back(std::move(l));
    for (auto& l : labels_with("k", spec.n_k)) labels.push_back(std::move(l));

    ConstructedFrame out;
    out.spec = spec;
    out.family = FrameFamily(std::move(all), std::move(labels));
    auto& truth = out.ground_truth;
    truth.g = IndexSet::range(0, spec.dim);
    truth.h = IndexSet::range(spec.dim, spec.dim + nh);
    truth.k = IndexSet::range(spec.dim + nh, spec.dim + nh + spec.n_k);
    truth.m0 = spec.m;
    for (std::size_t t = 0; t < nh; ++t) {
        const auto col = static_cast<Eigen::Index>(t);
        truth.h_supports.push_back(subframe::support_of(hs.col(col)));
        truth.h_split.emplace_back(block_part.col(col), perturbation.col(col));
        truth.h2_energy += perturbation.col(col).squaredNorm();
    }

    // h^2 must live in G and h^1 in its complement.
    for (const auto& [h1, h2] : truth.h_split) {
        if (spec.m < spec.dim && h2.tail(dim - static_cast<Eigen::Index>(spec.m)).cwiseAbs().maxCoeff() > 0.0)
            verification_failed("perturbation leaves G");
        if (spec.m > 0 && h1.head(static_cast<Eigen::Index>(spec.m)).cwiseAbs().maxCoeff() > 0.0)
            verification_failed("block part intersects G");
    }
    double expected_energy = 0.0;
    if (spec.m > 0)
        for (std::size_t t = 0; t < nh; ++t) expected_energy += std::pow(spec.h2_decay, 2.0 * static_cast<double>(t + 1));
    if (std::abs(expected_energy - truth.h2_energy) > 1e-12 * std::max(1.0, expected_energy))
        verification_failed("h^2 energy does not match the decay profile");
    return out;
}

ConstructedFrame make_failing_family(const ConstructionSpec& spec) {
    spec.validate();
    if (spec.kind != ConstructionKind::failing_family)
        throw Error(ErrorCode::invalid_input, "make_failing_family needs kind failing_family");
    if (spec.dim < 8) infeasible("failing family needs dim >= 8, got " + std::to_string(spec.dim));

    const std::size_t p = spec.dim / 2;
    const std::size_t columns = spec.m > 0 ? spec.m : p;
    if (columns > p)
        infeasible(std::to_string(columns) + " designated columns need at least " + std::to_string(2 * columns) +
                   " dimensions");
    const auto dim = static_cast<Eigen::Index>(spec.dim);
    const double r = spec.tail_decay;

    std::vector<std::size_t> designated;
    for (std::size_t m = 1; m <= columns; ++m) designated.push_back(2 * (m - 1) + 1);

    // k_n(j) = r^(n+j) off the designated columns. On designated column m the
    // entries are r^n times a DCT-IV column (never zero, full column rank),
    // rescaled so the column carries squared mass 0.9/m.
    Matrix ks(dim, static_cast<Eigen::Index>(p));
    for (std::size_t n = 0; n < p; ++n)
        for (std::size_t j = 0; j < spec.dim; ++j)
            ks(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n)) =
                std::pow(r, static_cast<double>(n + j));
    std::vector<double> column_sums;
    for (std::size_t m = 1; m <= columns; ++m) {
        const auto row = static_cast<Eigen::Index>(designated[m - 1]);
        for (std::size_t n = 0; n < p; ++n) {
            const double phase = std::numbers::pi / static_cast<double>(p) * (static_cast<double>(n) + 0.5) *
                                 (static_cast<double>(m - 1) + 0.5);
            ks(row, static_cast<Eigen::Index>(n)) = std::pow(r, static_cast<double>(n)) * std::cos(phase);
        }
        const double target = 0.9 / static_cast<double>(m);
        ks.row(row) *= std::sqrt(target / ks.row(row).squaredNorm());
        column_sums.push_back(ks.row(row).squaredNorm());
    }

    for (std::size_t m = 1; m <= columns; ++m) {
        const double sum = column_sums[m - 1];
        if (!(sum > 0.0 && sum < 1.0 / static_cast<double>(m)))
            infeasible("column " + std::to_string(m) + " squared sum " + std::to_string(sum) + " leaves (0, 1/m)");
        const auto row = static_cast<Eigen::Index>(designated[m - 1]);
        if (ks.row(row).cwiseAbs().minCoeff() <= subframe::kDefaultCoordTol)
            infeasible("designated column " + std::to_string(m) + " has a vanishing entry");
    }
    if (ks.cwiseAbs().minCoeff() <= 100.0 * subframe::kDefaultCoordTol)
        infeasible("tail_decay " + std::to_string(r) + " leaves full-support vectors with near-zero coordinates");

    Matrix all(dim, dim + static_cast<Eigen::Index>(p));
    all << identity_columns(spec.dim), ks;
    auto labels = labels_with("g", spec.dim);
    for (auto& l : labels_with("k", p)) labels.push_back(std::move(l));

    ConstructedFrame out;
    out.spec = spec;
    out.family = FrameFamily(std::move(all), std::move(labels));
    out.ground_truth.g = IndexSet::range(0, spec.dim);
    out.ground_truth.k = IndexSet::range(spec.dim, spec.dim + p);

    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < spec.dim; ++j)
        if (std::find(designated.begin(), designated.end(), j) == designated.end()) kept.push_back(j);
    for (std::size_t n = 0; n < p; ++n) kept.push_back(spec.dim + n);

    DesignedFailure failure;
    failure.subset = IndexSet(std::move(kept));
    failure.bound_ceiling = 1.0 / static_cast<double>(columns);
    failure.designated_coordinates = designated;
    failure.column_sums = column_sums;
    failure.measured_lower = optimal_bounds(out.family.subfamily(failure.subset), BoundsKind::frame_sequence).lower;
    if (!(failure.measured_lower < failure.bound_ceiling))
        verification_failed("designed subset lower bound " + std::to_string(failure.measured_lower) +
                            " is not below " + std::to_string(failure.bound_ceiling));
    out.designed_failure = std::move(failure);
    return out;
}

ConstructedFrame construct(const ConstructionSpec& spec) {
    switch (spec.kind) {
        case ConstructionKind::onb: {
            auto out = make_onb(spec.dim);
            out.spec = spec;
            return out;
        }
        case ConstructionKind::block_riesz: return make_block_riesz(spec);
        case ConstructionKind::subframe_recipe: return make_subframe_frame(spec);
        case ConstructionKind::failing_family: return make_failing_family(spec);
    }
    throw Error(ErrorCode::invalid_input, "unknown construction kind");
}

FrameFamily union_on_complements(const FrameFamily& f1, const FrameFamily& f2, const OrthoProjector& p) {
    if (f1.dim() != p.dim() || f2.dim() != p.dim())
        throw Error(ErrorCode::dimension_mismatch, "families and projector must share one ambient dimension");
    auto worst_residual = [](const FrameFamily& f, const Matrix& leak) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < leak.cols(); ++i)
            worst = std::max(worst, leak.col(i).norm() / std::max(1.0, f.matrix().col(i).norm()));
        return worst;
    };
    const Matrix& q = p.basis().matrix();
    const double leak1 = worst_residual(f1, f1.matrix() - q * (q.transpose() * f1.matrix()));
    const double leak2 = worst_residual(f2, q * (q.transpose() * f2.matrix()));
    if (leak1 > 1e-10)
        throw Error(ErrorCode::not_orthogonal, "first family leaves range(P); worst residual " + std::to_string(leak1));
    if (leak2 > 1e-10)
        throw Error(ErrorCode::not_orthogonal,
                    "second family leaves range(I - P); worst residual " + std::to_string(leak2));
    return f1.concat(f2);
}

}  // namespace framekit::constructions
