#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "framekit/constructions.hpp"
#include "framekit/error.hpp"
#include "framekit/rng.hpp"
#include "framekit/subframe.hpp"
#include "test_util.hpp"

namespace framekit::subframe {
namespace {

using test::family;
using test::kInvSqrt2;
using test::vec;

// Cyclic Jacobi rotations; shares no code with the library's Eigen path.
std::vector<double> jacobi_eigenvalues(Matrix a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> out;
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(a(i, i));
    std::sort(out.begin(), out.end());
    return out;
}

struct Brute {
    double lower = 0.0;
    double upper = 0.0;
};

// Direct min/max over every nonempty subset. Diagonalizes the smaller of
// X^T X and X X^T, which for Gaussian families is full rank almost surely,
// so no zero cutoff is involved.
Brute brute_force(const FrameFamily& f) {
    Brute b{1e300, 0.0};
    const std::size_t n = f.size();
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U) idx.push_back(i);
        const Matrix x = f.subfamily(IndexSet(idx)).matrix();
        const Matrix small = x.cols() <= x.rows() ? Matrix(x.transpose() * x) : Matrix(x * x.transpose());
        const auto eig = jacobi_eigenvalues(small);
        b.lower = std::min(b.lower, eig.front());
        b.upper = std::max(b.upper, eig.back());
    }
    return b;
}

FrameFamily random_family(RngStream& rng, std::size_t dim, std::size_t n) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.normal();
    return FrameFamily(m);
}

FrameFamily onb(std::size_t dim) { return FrameFamily(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))); }

TEST(IsFrameSequence, Examples) {
    auto [ok, b] = is_frame_sequence(family({{1, 0}}), 0.5);
    EXPECT_TRUE(ok);
    EXPECT_DOUBLE_EQ(b.lower, 1.0);
    EXPECT_DOUBLE_EQ(b.upper, 1.0);
    std::tie(ok, b) = is_frame_sequence(family({{1, 0}, {1, 1e-6}}), 1e-3);
    EXPECT_FALSE(ok);
    EXPECT_NEAR(b.lower / 5e-13, 1.0, 1e-3);
    std::tie(ok, b) = is_frame_sequence(onb(3), 0.9);
    EXPECT_TRUE(ok);
    EXPECT_THROW(is_frame_sequence(family({{0, 0}}), 0.1), Error);
}

TEST(RieszFrameBound, Onb) {
    const auto r = riesz_frame_bound(onb(2));
    EXPECT_DOUBLE_EQ(r.riesz_lower, 1.0);
    EXPECT_DOUBLE_EQ(r.riesz_upper, 1.0);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.subsets_examined, 3u);
}

TEST(RieszFrameBound, WorstSubsetUsesLowestIndexTie) {
    const auto r = riesz_frame_bound(family({{1, 0}, {0, 1}, {kInvSqrt2, kInvSqrt2}}));
    EXPECT_NEAR(r.riesz_lower, 1.0 - kInvSqrt2, 1e-12);
    EXPECT_EQ(r.worst.subset, IndexSet({0, 2}));
    EXPECT_EQ(r.subsets_examined, 7u);
}

TEST(RieszFrameBound, NearlyParallelPair) {
    const double eps = 1e-4;
    const auto r = riesz_frame_bound(family({{1, 0}, {1, eps}}));
    EXPECT_NEAR(r.riesz_lower / (eps * eps / 2.0), 1.0, 1e-3);
}

TEST(RieszFrameBound, ZeroSubsetsAreCounted) {
    const auto r = riesz_frame_bound(family({{0, 0}, {1, 0}}));
    EXPECT_EQ(r.subsets_skipped, 1u);
    EXPECT_EQ(r.subsets_examined, 2u);
    EXPECT_THROW(riesz_frame_bound(family({{0, 0}, {0, 0}})), Error);
}

TEST(RieszFrameBound, SizeLimit) {
    try {
        riesz_frame_bound(FrameFamily(Matrix::Ones(2, kExhaustiveLimit + 1)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::size_limit);
        EXPECT_NE(std::string(e.what()).find("sampled"), std::string::npos);
    }
    const auto r = riesz_frame_bound(FrameFamily(Matrix::Ones(2, kExhaustiveLimit + 1)), SubsetSearch::sampled(64, 3));
    EXPECT_FALSE(r.exhaustive);
}

TEST(RieszFrameBound, MatchesBruteForceOracle) {
    RngStream rng(CounterRng(21).split(1));
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_family(rng, rng.between(1, 5), rng.between(1, 8));
        const auto r = riesz_frame_bound(f);
        const auto b = brute_force(f);
        ASSERT_NEAR(r.riesz_lower, b.lower, 1e-9) << "trial " << trial;
        ASSERT_NEAR(r.riesz_upper, b.upper, 1e-9 * std::max(1.0, b.upper)) << "trial " << trial;
    }
}

TEST(RieszFrameBound, ThreadCountDoesNotChangeReport) {
    RngStream rng(CounterRng(22).split(1));
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_family(rng, 4, 12);
        const auto one = riesz_frame_bound(f, SubsetSearch::exhaustive(), {}, 1);
        for (unsigned threads : {2u, 3u, 8u}) {
            const auto many = riesz_frame_bound(f, SubsetSearch::exhaustive(), {}, threads);
            EXPECT_EQ(one.riesz_lower, many.riesz_lower);
            EXPECT_EQ(one.riesz_upper, many.riesz_upper);
            EXPECT_EQ(one.worst.subset, many.worst.subset);
        }
    }
}

TEST(RieszFrameBound, AddingAVectorIsMonotone) {
    RngStream rng(CounterRng(23).split(1));
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = rng.between(1, 4);
        const auto f = random_family(rng, dim, rng.between(1, 7));
        const auto g = f.concat(random_family(rng, dim, 1));
        const auto a = riesz_frame_bound(f);
        const auto b = riesz_frame_bound(g);
        EXPECT_LE(b.riesz_lower, a.riesz_lower);
        EXPECT_GE(b.riesz_upper, a.riesz_upper);
    }
}

TEST(RieszFrameBound, SampledIsDeterministicAndCoversSmallSubsets) {
    RngStream rng(CounterRng(24).split(1));
    const auto f = random_family(rng, 3, 10);
    const auto a = riesz_frame_bound(f, SubsetSearch::sampled(50, 9));
    const auto b = riesz_frame_bound(f, SubsetSearch::sampled(50, 9));
    EXPECT_EQ(a.riesz_lower, b.riesz_lower);
    EXPECT_EQ(a.worst.subset, b.worst.subset);
    const auto full = riesz_frame_bound(f);
    EXPECT_GE(a.riesz_lower, full.riesz_lower);
    EXPECT_LE(a.riesz_upper, full.riesz_upper);
    // Singletons and pairs are always included.
    double pair_min = 1e300;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            pair_min = std::min(pair_min, riesz_frame_bound(f.subfamily(IndexSet({i, j}))).riesz_lower);
    EXPECT_LE(a.riesz_lower, pair_min);
}

TEST(ExtractRieszBasis, Examples) {
    auto b = extract_riesz_basis(family({{1, 0}, {0, 1}, {1, 1}}));
    EXPECT_EQ(b.indices, IndexSet({0, 1}));
    EXPECT_NEAR(b.constants.lower, 1.0, 1e-14);
    EXPECT_NEAR(b.constants.upper, 1.0, 1e-14);
    EXPECT_EQ(b.constants.kind, BoundsKind::riesz_constants);
    EXPECT_EQ(extract_riesz_basis(family({{2, 0}, {3, 0}, {0, 5}})).indices, IndexSet({0, 2}));
    b = extract_riesz_basis(family({{kInvSqrt2, kInvSqrt2}, {1, 0}, {0, 1}}));
    EXPECT_EQ(b.indices, IndexSet({0, 1}));
    EXPECT_NEAR(b.constants.lower, std::sqrt(1.0 - kInvSqrt2), 1e-12);
    EXPECT_NEAR(b.constants.upper, std::sqrt(1.0 + kInvSqrt2), 1e-12);
    EXPECT_THROW(extract_riesz_basis(family({{0, 0}})), Error);
}

TEST(ExtractRieszBasis, PreservesSpan) {
    RngStream rng(CounterRng(25).split(1));
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = rng.between(2, 6);
        const std::size_t r = rng.between(1, dim);
        const Matrix m = random_family(rng, dim, r).matrix() * random_family(rng, r, rng.between(r, r + 4)).matrix();
        const FrameFamily f(m);
        const auto b = extract_riesz_basis(f);
        EXPECT_EQ(b.indices.size(), r);
        EXPECT_GT(b.constants.lower, 0.0);
        const auto p = OrthoProjector::onto_span(f.subfamily(b.indices));
        for (std::size_t i = 0; i < f.size(); ++i)
            EXPECT_LE((f.vector(i) - p.apply(f.vector(i))).norm(), 1e-8 * std::max(1.0, f.vector(i).norm()));
    }
}

TEST(PartitionDisjointSupport, Examples) {
    auto groups = partition_disjoint_support(family({{1, 0}, {0, 1}, {1, 1}}), onb(2));
    ASSERT_EQ(groups.size(), 2u);
    EXPECT_EQ(groups[0], IndexSet({0, 1}));
    EXPECT_EQ(groups[1], IndexSet({2}));
    groups = partition_disjoint_support(onb(3), onb(3));
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0], IndexSet({0, 1, 2}));
    groups = partition_disjoint_support(family({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}}), onb(4));
    ASSERT_EQ(groups.size(), 2u);
    EXPECT_EQ(groups[0], IndexSet({0, 2}));
    EXPECT_EQ(groups[1], IndexSet({1, 3}));
    EXPECT_THROW(partition_disjoint_support(onb(2), family({{1, 0}, {2, 0}})), Error);
}

TEST(PartitionDisjointSupport, GroupsAreDisjointAndWithinPigeonholeBound) {
    RngStream rng(CounterRng(26).split(1));
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t dim = rng.between(4, 12);
        const std::size_t K = rng.between(1, 3);
        const double a = rng.uniform(0.2, 1.0);
        const double b = rng.uniform(a, 1.0);
        const std::size_t n = rng.between(1, 20);
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (std::size_t s = 0; s < K; ++s)
                m(static_cast<Eigen::Index>(rng.below(dim)), j) = std::sqrt(rng.uniform(a, b)) * (rng.coin() ? 1 : -1);
        const FrameFamily f(m);
        const auto groups = partition_disjoint_support(f, onb(dim));
        std::size_t total = 0;
        for (const auto& g : groups) {
            total += g.size();
            std::vector<int> hits(dim, 0);
            for (std::size_t i : g)
                for (std::size_t c : support_of(f.vector(i))) EXPECT_EQ(hits[c]++, 0);
        }
        EXPECT_EQ(total, n);
        const double upper = optimal_bounds(f, BoundsKind::frame_sequence).upper;
        double min_coord = 1e300;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                if (m(i, j) != 0.0) min_coord = std::min(min_coord, std::abs(m(i, j)));
        EXPECT_LE(groups.size(), pigeonhole_group_bound(K, min_coord, upper));
    }
}

TEST(ClassifySupports, Examples) {
    const auto with_v = onb(4).concat(family({{0.5, 0.5, 0.5, 0.5}}));
    auto d = classify_supports(with_v, IndexSet::range(0, 4));
    EXPECT_EQ(d.k, IndexSet({4}));
    EXPECT_TRUE(d.h.empty());
    const auto with_w = onb(4).concat(family({{1, 1, 0, 0}}));
    d = classify_supports(with_w, IndexSet::range(0, 4));
    EXPECT_EQ(d.h, IndexSet({4}));
    ASSERT_EQ(d.h_supports.size(), 1u);
    EXPECT_EQ(d.h_supports[0], IndexSet({0, 1}));
    EXPECT_EQ(d.m0, 0u);
    EXPECT_THROW(classify_supports(with_w, IndexSet({0, 1, 4})), Error);
}

TEST(ClassifySupports, SplitIsOrthogonal) {
    // Crossing supports {0,1} and {1,2} become nested ({1} inside {1,2}) once coordinate 0 is dropped.
    const auto f = onb(4).concat(family({{1, 1, 0, 0}, {0, 1, 1, 0}}));
    const auto d = classify_supports(f, IndexSet::range(0, 4));
    EXPECT_EQ(d.m0, 1u);
    double energy = 0.0;
    for (const auto& [h1, h2] : d.h_split) {
        EXPECT_LT(h1.head(1).norm(), 1e-12);
        EXPECT_LT(h2.tail(3).norm(), 1e-12);
        energy += h2.squaredNorm();
    }
    EXPECT_NEAR(d.h2_energy, energy, 1e-14);
    EXPECT_NEAR(d.h2_energy, 1.0, 1e-14);
}

TEST(ProjectedSupports, OnbAlone) {
    const auto d = classify_supports(onb(2), IndexSet::range(0, 2));
    const auto r = sample_projected_supports(onb(2), d, 16, 1);
    EXPECT_DOUBLE_EQ(r.empirical_a0, 1.0);
}

TEST(ProjectedSupports, BlockFamilyStaysAboveFormula) {
    constructions::ConstructionSpec spec;
    spec.kind = constructions::ConstructionKind::block_riesz;
    spec.dim = 4;
    spec.k = 1;
    spec.K = 1;
    spec.n_h = 2;
    const auto c = constructions::construct(spec);
    const auto r = sample_projected_supports(c.family, c.ground_truth, 64, 5);
    EXPECT_GE(r.empirical_a0, 1.0 / 16.0);
    EXPECT_LE(r.max_support, 1u);
    EXPECT_TRUE(coefficient_window_holds(r, {riesz_frame_bound(c.family).riesz_lower,
                                          riesz_frame_bound(c.family).riesz_upper, BoundsKind::frame_sequence}));
}

TEST(ProjectedSupports, SingleProjection) {
    const auto f = onb(4).concat(family({{1, 1, 0, 0}}));
    const auto d = classify_supports(f, IndexSet::range(0, 4));
    EXPECT_NEAR(projected_h_lower_bound(f, d, IndexSet({0}), IndexSet({4})), 1.0, 1e-14);
    EXPECT_EQ(projected_h_lower_bound(f, d, IndexSet({2}), IndexSet({4})), 0.0);
    EXPECT_THROW(projected_h_lower_bound(f, d, IndexSet({0}), IndexSet({0})), Error);
}

TEST(ProjectedSupports, RejectsFullSupportVectors) {
    const auto f = onb(4).concat(family({{0.5, 0.5, 0.5, 0.5}}));
    const auto d = classify_supports(f, IndexSet::range(0, 4));
    try {
        sample_projected_supports(f, d, 4, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::wrong_structure);
    }
}

TEST(ProjectedSupports, DeterministicPerSeed) {
    const auto f = onb(4).concat(family({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}}));
    const auto d = classify_supports(f, IndexSet::range(0, 4));
    const auto a = sample_projected_supports(f, d, 32, 8);
    const auto b = sample_projected_supports(f, d, 32, 8);
    EXPECT_EQ(a.empirical_a0, b.empirical_a0);
    EXPECT_EQ(a.worst_delta, b.worst_delta);
    EXPECT_EQ(a.worst_gamma, b.worst_gamma);
}

}  // namespace
}  // namespace framekit::subframe
