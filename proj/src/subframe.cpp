#include "framekit/subframe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "framekit/error.hpp"
#include "framekit/rng.hpp"

namespace framekit::subframe {

std::pair<bool, FrameBounds> is_frame_sequence(const FrameFamily& f, double threshold, const TolerancePolicy& tol) {
    const FrameBounds bounds = optimal_bounds(f, BoundsKind::frame_sequence, tol);
    return {bounds.lower > threshold, bounds};
}

namespace {

// One subset's frame-sequence bounds; nullopt when every selected vector is zero.
struct SubsetBounds {
    double lower;
    double upper;
};

class SubsetEvaluator {
public:
    SubsetEvaluator(const FrameFamily& f, const TolerancePolicy& tol)
        : columns_(f.matrix()), tol_(tol), zero_(f.size()) {
        for (std::size_t i = 0; i < f.size(); ++i)
            zero_[i] = columns_.col(static_cast<Eigen::Index>(i)).squaredNorm() == 0.0;
    }

    template <typename IndexRange>
    std::optional<SubsetBounds> operator()(const IndexRange& indices) {
        std::size_t count = 0;
        for (std::size_t i : indices)
            if (!zero_[i]) ++count;
        if (count == 0) return std::nullopt;
        scratch_.resize(columns_.rows(), static_cast<Eigen::Index>(count));
        Eigen::Index col = 0;
        for (std::size_t i : indices)
            if (!zero_[i]) scratch_.col(col++) = columns_.col(static_cast<Eigen::Index>(i));
        svd_.compute(scratch_);
        const Vector& sv = svd_.singularValues();
        const double cutoff = tol_.rank_tol_rel * sv(0);
        Eigen::Index rank = 0;
        while (rank < sv.size() && sv(rank) > cutoff) ++rank;
        return SubsetBounds{sv(rank - 1) * sv(rank - 1), sv(0) * sv(0)};
    }

private:
    const Matrix& columns_;
    TolerancePolicy tol_;
    std::vector<bool> zero_;
    Matrix scratch_;
    Eigen::JacobiSVD<Matrix> svd_;
};

// Bits of a mask as an ascending index list, without allocation.
struct MaskIndices {
    std::uint64_t mask;
    struct iterator {
        std::uint64_t rest;
        std::size_t operator*() const { return static_cast<std::size_t>(std::countr_zero(rest)); }
        iterator& operator++() {
            rest &= rest - 1;
            return *this;
        }
        bool operator!=(const iterator& o) const { return rest != o.rest; }
    };
    iterator begin() const { return {mask}; }
    iterator end() const { return {0}; }
};

// Lexicographic comparison of the sorted index lists encoded by two masks.
bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
    while (a != 0 && b != 0) {
        const int la = std::countr_zero(a);
        const int lb = std::countr_zero(b);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

// Lower bounds that agree to ~12 significant digits count as tied, so the
// lowest-index tie-break is not decided by rounding noise. Truncating the
// mantissa keeps the comparison a total preorder, hence order independent.
std::uint64_t tie_key(double x) {
    constexpr std::uint64_t drop = 12;
    const auto bits = std::bit_cast<std::uint64_t>(x);
    return (bits + (std::uint64_t{1} << (drop - 1))) >> drop;
}

struct Candidate {
    std::uint64_t key = std::numeric_limits<std::uint64_t>::max();
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;

    bool beats(const Candidate& o, bool lex_less) const { return key < o.key || (key == o.key && lex_less); }
};

struct MaskAccumulator {
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    Candidate best;
    std::uint64_t worst = 0;
    std::size_t examined = 0;
    std::size_t skipped = 0;

    void add(std::uint64_t mask, const std::optional<SubsetBounds>& b) {
        if (!b) {
            ++skipped;
            return;
        }
        ++examined;
        upper = std::max(upper, b->upper);
        lower = std::min(lower, b->lower);
        const Candidate c{tie_key(b->lower), b->lower, b->upper};
        if (c.beats(best, mask_lex_less(mask, worst))) {
            best = c;
            worst = mask;
        }
    }

    void merge(const MaskAccumulator& o) {
        examined += o.examined;
        skipped += o.skipped;
        upper = std::max(upper, o.upper);
        lower = std::min(lower, o.lower);
        if (o.examined > 0 && o.best.beats(best, mask_lex_less(o.worst, worst))) {
            best = o.best;
            worst = o.worst;
        }
    }
};

IndexSet mask_to_set(std::uint64_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i : MaskIndices{mask}) out.push_back(i);
    return IndexSet(std::move(out));
}

RieszFrameReport exhaustive_search(const FrameFamily& f, const TolerancePolicy& tol, unsigned threads) {
    const std::size_t n = f.size();
    if (n > kExhaustiveLimit)
        throw Error(ErrorCode::size_limit, "exhaustive subset search is limited to " +
                                               std::to_string(kExhaustiveLimit) + " vectors (family has " +
                                               std::to_string(n) + "); use sampled mode");
    const std::uint64_t last = (std::uint64_t{1} << n) - 1;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (last < 4096) threads = 1;

    std::vector<MaskAccumulator> partial(threads);
    auto work = [&](unsigned t) {
        SubsetEvaluator eval(f, tol);
        for (std::uint64_t mask = 1 + t; mask <= last; mask += threads)
            partial[t].add(mask, eval(MaskIndices{mask}));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    MaskAccumulator total;
    for (const auto& p : partial) total.merge(p);
    if (total.examined == 0) throw Error(ErrorCode::degenerate_input, "every vector in the family is zero");

    RieszFrameReport report;
    report.riesz_lower = total.lower;
    report.riesz_upper = total.upper;
    report.worst = {mask_to_set(total.worst), total.best.lower, total.best.upper};
    report.exhaustive = true;
    report.subsets_examined = total.examined;
    report.subsets_skipped = total.skipped;
    return report;
}

RieszFrameReport sampled_search(const FrameFamily& f, const SubsetSearch& mode, const TolerancePolicy& tol) {
    const std::size_t n = f.size();
    SubsetEvaluator eval(f, tol);
    RieszFrameReport report;
    report.exhaustive = false;
    report.riesz_lower = std::numeric_limits<double>::infinity();
    Candidate best;

    auto consider = [&](const std::vector<std::size_t>& subset) {
        const auto b = eval(subset);
        if (!b) {
            ++report.subsets_skipped;
            return;
        }
        ++report.subsets_examined;
        report.riesz_upper = std::max(report.riesz_upper, b->upper);
        report.riesz_lower = std::min(report.riesz_lower, b->lower);
        const Candidate c{tie_key(b->lower), b->lower, b->upper};
        if (c.beats(best, subset < report.worst.subset.values())) {
            best = c;
            report.worst = {IndexSet(subset), b->lower, b->upper};
        }
    };

    for (std::size_t i = 0; i < n; ++i) consider({i});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) consider({i, j});
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    consider(all);

    const CounterRng rng = CounterRng(mode.seed).split(0x5b5e7);
    for (std::size_t s = 0; s < mode.n_samples; ++s) {
        const CounterRng draw = rng.split(s);
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (draw.bits(i) & 1U) subset.push_back(i);
        if (subset.empty()) subset.push_back(static_cast<std::size_t>(draw.below(n, n)));
        consider(subset);
    }
    if (report.subsets_examined == 0)
        throw Error(ErrorCode::degenerate_input, "every vector in the family is zero");
    return report;
}

}  // namespace

RieszFrameReport riesz_frame_bound(const FrameFamily& f, const SubsetSearch& mode, const TolerancePolicy& tol,
                                   unsigned threads) {
    if (f.empty()) throw Error(ErrorCode::invalid_input, "subset search over an empty family");
    if (mode.mode == SubsetSearch::Mode::exhaustive) return exhaustive_search(f, tol, threads);
    return sampled_search(f, mode, tol);
}

RieszBasis extract_riesz_basis(const FrameFamily& f, const TolerancePolicy& tol) {
    const auto ortho = linalg::orthonormalize(f, tol);
    if (ortho.selected.empty()) throw Error(ErrorCode::degenerate_input, "every vector in the family is zero");
    IndexSet indices(ortho.selected);
    return {indices, optimal_bounds(f.subfamily(indices), BoundsKind::riesz_constants, tol)};
}

Matrix basis_coordinates(const FrameFamily& f, const FrameFamily& basis, const TolerancePolicy& tol) {
    if (basis.dim() != f.dim())
        throw Error(ErrorCode::dimension_mismatch, "basis dimension " + std::to_string(basis.dim()) +
                                                       " differs from family dimension " + std::to_string(f.dim()));
    if (basis.size() != basis.dim())
        throw Error(ErrorCode::invalid_basis, "basis has " + std::to_string(basis.size()) + " vectors in dimension " +
                                                  std::to_string(basis.dim()));
    const auto sv = linalg::singular_values(basis.matrix());
    if (linalg::numerical_rank(sv, tol) < basis.size())
        throw Error(ErrorCode::invalid_basis, "basis vectors are linearly dependent");
    return Eigen::PartialPivLU<Matrix>(basis.matrix()).solve(f.matrix());
}

IndexSet support_of(const Vector& coordinates, double coord_tol) {
    std::vector<std::size_t> out;
    for (Eigen::Index j = 0; j < coordinates.size(); ++j)
        if (std::abs(coordinates(j)) > coord_tol) out.push_back(static_cast<std::size_t>(j));
    return IndexSet(std::move(out));
}

namespace {

bool disjoint(const IndexSet& a, const IndexSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i;
        else ++j;
    }
    return true;
}

bool subset_of(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

IndexSet restrict_from(const IndexSet& s, std::size_t first) {
    std::vector<std::size_t> out;
    for (std::size_t j : s)
        if (j >= first) out.push_back(j);
    return IndexSet(std::move(out));
}

bool laminar_from(const std::vector<IndexSet>& supports, std::size_t first) {
    std::vector<IndexSet> tails;
    tails.reserve(supports.size());
    for (const auto& s : supports) tails.push_back(restrict_from(s, first));
    for (std::size_t a = 0; a < tails.size(); ++a)
        for (std::size_t b = a + 1; b < tails.size(); ++b)
            if (!disjoint(tails[a], tails[b]) && !subset_of(tails[a], tails[b]) && !subset_of(tails[b], tails[a]))
                return false;
    return true;
}

}  // namespace

std::vector<IndexSet> partition_disjoint_support(const FrameFamily& f, const FrameFamily& basis, double coord_tol) {
    const Matrix coords = basis_coordinates(f, basis);
    std::vector<IndexSet> groups;
    std::vector<std::vector<bool>> occupied;  // per group, which coordinates are used
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const IndexSet support = support_of(coords.col(static_cast<Eigen::Index>(i)), coord_tol);
        std::size_t g = 0;
        for (; g < occupied.size(); ++g)
            if (std::none_of(support.begin(), support.end(), [&](std::size_t j) { return occupied[g][j]; })) break;
        if (g == occupied.size()) {
            occupied.emplace_back(f.dim(), false);
            members.emplace_back();
        }
        for (std::size_t j : support) occupied[g][j] = true;
        members[g].push_back(i);
    }
    for (auto& m : members) groups.emplace_back(std::move(m));
    return groups;
}

std::size_t pigeonhole_group_bound(std::size_t max_support, double min_coordinate, double upper_bound) {
    if (!(min_coordinate > 0.0 && upper_bound > 0.0))
        throw Error(ErrorCode::invalid_input, "pigeonhole bound needs positive coordinate floor and upper bound");
    const auto per_coordinate =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(upper_bound / (min_coordinate * min_coordinate))));
    return 1 + max_support * (per_coordinate - 1);
}

SubframeDecomposition classify_supports(const FrameFamily& f, const IndexSet& basis_indices,
                                        const ClassifyOptions& options, const TolerancePolicy& tol) {
    basis_indices.check_bound(f.size());
    const FrameFamily basis = f.subfamily(basis_indices);
    const Matrix coords = basis_coordinates(f, basis, tol);
    const std::size_t dim = f.dim();
    const double full_support = options.support_fraction * static_cast<double>(dim);

    SubframeDecomposition out;
    out.g = basis_indices;
    std::vector<std::size_t> h, k;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (basis_indices.contains(i)) continue;
        IndexSet support = support_of(coords.col(static_cast<Eigen::Index>(i)), options.coord_tol);
        if (static_cast<double>(support.size()) >= full_support) {
            k.push_back(i);
        } else {
            h.push_back(i);
            out.h_supports.push_back(std::move(support));
        }
    }
    out.h = IndexSet(std::move(h));
    out.k = IndexSet(std::move(k));

    if (options.g_prefix) {
        out.m0 = std::min(*options.g_prefix, dim);
    } else {
        std::size_t p = 0;
        while (p < dim && !laminar_from(out.h_supports, p)) ++p;
        out.m0 = p;
    }

    const OrthoProjector to_g = OrthoProjector::onto_span(basis.subfamily(IndexSet::range(0, out.m0)), tol);
    for (std::size_t i : out.h) {
        const Vector v = f.vector(i);
        Vector h2 = to_g.apply(v);
        Vector h1 = v - h2;
        out.h2_energy += h2.squaredNorm();
        out.h_split.emplace_back(std::move(h1), std::move(h2));
    }
    return out;
}

namespace {

FrameFamily natural_projection(const FrameFamily& f, const Matrix& basis, const Matrix& coords,
                               const IndexSet& delta, const IndexSet& gamma1) {
    Matrix kept = Matrix::Zero(coords.rows(), static_cast<Eigen::Index>(gamma1.size()));
    Eigen::Index col = 0;
    for (std::size_t i : gamma1) {
        for (std::size_t j : delta)
            kept(static_cast<Eigen::Index>(j), col) = coords(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        ++col;
    }
    std::vector<std::string> labels;
    for (std::size_t i : gamma1) labels.push_back(f.label(i));
    return FrameFamily(basis * kept, std::move(labels));
}

}  // namespace

double projected_h_lower_bound(const FrameFamily& f, const SubframeDecomposition& decomposition,
                               const IndexSet& delta, const IndexSet& gamma1, const TolerancePolicy& tol) {
    delta.check_bound(f.dim());
    for (std::size_t i : gamma1)
        if (!decomposition.h.contains(i))
            throw Error(ErrorCode::invalid_input, "index " + std::to_string(i) + " is not an h index");
    const FrameFamily basis = f.subfamily(decomposition.g);
    const Matrix coords = basis_coordinates(f, basis, tol);
    const FrameFamily projected = natural_projection(f, basis.matrix(), coords, delta, gamma1);
    if (!projected.has_nonzero()) return 0.0;
    return optimal_bounds(projected, BoundsKind::frame_sequence, tol).lower;
}

ProjectedSupportReport sample_projected_supports(const FrameFamily& f,
                                                 const SubframeDecomposition& decomposition,
                                                 std::size_t n_projector_samples, std::uint64_t seed,
                                                 const TolerancePolicy& tol) {
    if (!decomposition.k.empty())
        throw Error(ErrorCode::wrong_structure, "decomposition has " + std::to_string(decomposition.k.size()) +
                                                    " full-support vectors; a Riesz frame split has none");
    const FrameFamily basis = f.subfamily(decomposition.g);
    const Matrix coords = basis_coordinates(f, basis, tol);
    const std::size_t dim = f.dim();

    ProjectedSupportReport report;
    const double g_only = optimal_bounds(basis, BoundsKind::frame_sequence, tol).lower;
    if (decomposition.h.empty()) {
        report.empirical_a0 = g_only;
        return report;
    }

    report.coefficient_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : decomposition.h) {
        const Vector c = coords.col(static_cast<Eigen::Index>(i));
        const IndexSet support = support_of(c);
        report.max_support = std::max(report.max_support, support.size());
        for (std::size_t j : support) {
            const double a = std::abs(c(static_cast<Eigen::Index>(j)));
            report.coefficient_min = std::min(report.coefficient_min, a);
            report.coefficient_max = std::max(report.coefficient_max, a);
        }
    }
    if (report.max_support == 0) report.coefficient_min = 0.0;

    report.empirical_a0 = std::numeric_limits<double>::infinity();
    const CounterRng rng = CounterRng(seed).split(0x7424);
    const std::size_t nh = decomposition.h.size();
    for (std::size_t s = 0; s < n_projector_samples; ++s) {
        const CounterRng draw = rng.split(s);
        std::vector<std::size_t> delta, gamma;
        if (s == 0) {
            // Full coordinate set and every h vector.
            delta = IndexSet::range(0, dim).values();
            gamma = decomposition.h.values();
        } else {
            for (std::size_t j = 0; j < dim; ++j)
                if (draw.bits(j) & 1U) delta.push_back(j);
            for (std::size_t t = 0; t < nh; ++t)
                if (draw.bits(dim + t) & 1U) gamma.push_back(decomposition.h[t]);
            if (gamma.empty()) gamma.push_back(decomposition.h[draw.below(dim + nh, nh)]);
        }
        const IndexSet delta_set(std::move(delta));
        const IndexSet gamma_set(std::move(gamma));
        const FrameFamily projected = natural_projection(f, basis.matrix(), coords, delta_set, gamma_set);
        if (!projected.has_nonzero()) {
            ++report.samples_skipped;
            continue;
        }
        ++report.samples_used;
        const double lower = optimal_bounds(projected, BoundsKind::frame_sequence, tol).lower;
        if (lower < report.empirical_a0) {
            report.empirical_a0 = lower;
            report.worst_delta = delta_set;
            report.worst_gamma = gamma_set;
        }
    }
    if (report.samples_used == 0) report.empirical_a0 = g_only;
    return report;
}

bool coefficient_window_holds(const ProjectedSupportReport& report, const FrameBounds& riesz_bounds) {
    if (report.max_support == 0) return true;
    constexpr double slack = 1e-10;
    const double lo = report.coefficient_min * report.coefficient_min;
    const double hi = report.coefficient_max * report.coefficient_max;
    return lo >= riesz_bounds.lower - slack && hi <= riesz_bounds.upper + slack;
}

}  // namespace framekit::subframe
