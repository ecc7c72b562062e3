#include <gtest/gtest.h>

#include <cmath>

#include "framekit/constructions.hpp"
#include "framekit/error.hpp"
#include "framekit/rng.hpp"
#include "framekit/subframe.hpp"
#include "framekit/verify.hpp"
#include "test_util.hpp"

namespace framekit::constructions {
namespace {

ConstructionSpec block(std::size_t dim, std::size_t k, std::size_t K, std::size_t n_h) {
    ConstructionSpec s;
    s.kind = ConstructionKind::block_riesz;
    s.dim = dim;
    s.k = k;
    s.K = K;
    s.n_h = n_h;
    return s;
}

ConstructionSpec recipe(std::size_t dim, std::size_t m, std::size_t n_h, std::size_t n_k) {
    ConstructionSpec s;
    s.kind = ConstructionKind::subframe_recipe;
    s.dim = dim;
    s.m = m;
    s.n_h = n_h;
    s.n_k = n_k;
    return s;
}

ConstructionSpec failing(std::size_t dim, std::size_t m, double tail) {
    ConstructionSpec s;
    s.kind = ConstructionKind::failing_family;
    s.dim = dim;
    s.m = m;
    s.tail_decay = tail;
    return s;
}

ErrorCode code_of(const ConstructionSpec& s) {
    try {
        construct(s);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::invalid_input;
}

TEST(GuaranteedBounds, Formula) {
    auto g = guaranteed_bounds(1, 1, 1, 1);
    EXPECT_DOUBLE_EQ(g.D, 1.0);
    EXPECT_DOUBLE_EQ(g.lower, 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(g.upper, 2.0);
    g = guaranteed_bounds(1, 2, 1, 1);
    EXPECT_DOUBLE_EQ(g.lower, 1.0 / 48.0);
    EXPECT_DOUBLE_EQ(g.upper, 3.0);
    // k = 2, D = 2: 1 / (4 * 64 * 3 * 5)
    g = guaranteed_bounds(2, 2, 0.5, 0.5);
    EXPECT_DOUBLE_EQ(g.D, 2.0);
    EXPECT_DOUBLE_EQ(g.lower, 1.0 / 3840.0);
    EXPECT_DOUBLE_EQ(g.upper, 5.0);
    EXPECT_THROW(guaranteed_bounds(0, 1, 1, 1), Error);
    EXPECT_THROW(guaranteed_bounds(1, 1, 2, 1), Error);
}

TEST(MakeOnb, Examples) {
    for (std::size_t d : {1u, 2u, 4u}) {
        const auto c = make_onb(d);
        EXPECT_EQ(c.family.size(), d);
        EXPECT_TRUE(frame_operator(c.family).isApprox(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))));
        EXPECT_EQ(c.family.label(0), "g:0");
        ASSERT_TRUE(c.guaranteed.has_value());
        EXPECT_EQ(c.guaranteed->lower, 1.0);
        EXPECT_EQ(c.guaranteed->upper, 1.0);
    }
    EXPECT_THROW(make_onb(0), Error);
}

TEST(MakeBlockRiesz, SingleCoordinateBlocks) {
    const auto c = make_block_riesz(block(4, 1, 1, 2));
    ASSERT_EQ(c.family.size(), 6u);
    EXPECT_TRUE(c.family.vector(4).isApprox(test::vec({0, 1, 0, 0})));
    EXPECT_TRUE(c.family.vector(5).isApprox(test::vec({0, 0, 0, 1})));
    EXPECT_EQ(c.family.label(4), "h:0");
    EXPECT_DOUBLE_EQ(c.guaranteed->lower, 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(c.guaranteed->upper, 2.0);
    const auto r = subframe::riesz_frame_bound(c.family);
    EXPECT_GE(r.riesz_lower, c.guaranteed->lower);
    EXPECT_LE(r.riesz_upper, c.guaranteed->upper + 1e-8);
}

TEST(MakeBlockRiesz, TwoCoordinateBlocks) {
    const auto c = make_block_riesz(block(4, 1, 2, 2));
    EXPECT_DOUBLE_EQ(c.guaranteed->lower, 1.0 / 48.0);
    EXPECT_DOUBLE_EQ(c.guaranteed->upper, 3.0);
    EXPECT_GE(subframe::riesz_frame_bound(c.family).riesz_lower, 1.0 / 48.0);
}

TEST(MakeBlockRiesz, RandomSpecsRespectGuaranteedBounds) {
    RngStream rng(CounterRng(31).split(1));
    for (int trial = 0; trial < 40; ++trial) {
        const auto spec = verify::random_block_spec(rng, 10, 14);
        const auto c = make_block_riesz(spec);
        ASSERT_LE(c.family.size(), 14u);
        const auto r = subframe::riesz_frame_bound(c.family);
        EXPECT_GE(r.riesz_lower, c.guaranteed->lower);
        EXPECT_LE(r.riesz_upper, c.guaranteed->upper + 1e-8);
        // Squared coordinate window and support size on the h part.
        for (std::size_t i : c.ground_truth.h) {
            std::size_t support = 0;
            for (Eigen::Index j = 0; j < c.family.matrix().rows(); ++j) {
                const double x = c.family.matrix()(j, static_cast<Eigen::Index>(i));
                if (x == 0.0) continue;
                ++support;
                EXPECT_GE(x * x, spec.A * (1 - 1e-12));
                EXPECT_LE(x * x, spec.B * (1 + 1e-12));
            }
            EXPECT_LE(support, spec.K);
        }
    }
}

TEST(MakeBlockRiesz, InfeasibleNamesMinimumDim) {
    try {
        make_block_riesz(block(4, 1, 3, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::infeasible_spec);
        EXPECT_NE(std::string(e.what()).find("minimum dim is 6"), std::string::npos) << e.what();
    }
    EXPECT_EQ(code_of(block(8, 3, 2, 2)), ErrorCode::infeasible_spec);
}

TEST(ConstructionSpec, Validation) {
    auto s = block(4, 1, 1, 2);
    s.A = 2;
    s.B = 1;
    EXPECT_EQ(code_of(s), ErrorCode::invalid_input);
    s = block(4, 1, 5, 1);
    EXPECT_EQ(code_of(s), ErrorCode::invalid_input);
    s = recipe(4, 4, 1, 0);
    EXPECT_EQ(code_of(s), ErrorCode::invalid_input);
    s = recipe(6, 1, 1, 0);
    s.h2_decay = 1.0;
    EXPECT_EQ(code_of(s), ErrorCode::invalid_input);
    s = recipe(6, 1, 1, 0);
    s.tail_decay = 0.0;
    EXPECT_EQ(code_of(s), ErrorCode::invalid_input);
    s.dim = 0;
    EXPECT_EQ(code_of(s), ErrorCode::invalid_input);
    EXPECT_EQ(construction_kind_from_string("block_riesz"), ConstructionKind::block_riesz);
    EXPECT_EQ(to_string(ConstructionKind::failing_family), "failing_family");
    EXPECT_THROW(construction_kind_from_string("gabor"), Error);
}

TEST(MakeSubframeFrame, PerturbationEnergy) {
    auto s = recipe(4, 1, 2, 0);
    s.h2_decay = 0.5;
    const auto c = make_subframe_frame(s);
    EXPECT_DOUBLE_EQ(c.ground_truth.h2_energy, 0.3125);
    EXPECT_EQ(c.ground_truth.m0, 1u);
    for (const auto& [h1, h2] : c.ground_truth.h_split) {
        EXPECT_EQ(h1(0), 0.0);
        EXPECT_EQ(h2.tail(3).norm(), 0.0);
    }
}

TEST(MakeSubframeFrame, TailVector) {
    auto s = recipe(4, 0, 1, 1);
    s.tail_decay = 0.5;
    const auto c = make_subframe_frame(s);
    ASSERT_EQ(c.ground_truth.k.size(), 1u);
    const Vector k = c.family.vector(c.ground_truth.k[0]);
    const Vector want = test::vec({1, 0.5, 0.25, 0.125}).normalized();
    EXPECT_LT((k - want).norm(), 1e-15);
    const auto d = subframe::classify_supports(c.family, c.ground_truth.g);
    EXPECT_EQ(d.k, c.ground_truth.k);
}

TEST(MakeSubframeFrame, ClassifyRecoversGeneratorLabels) {
    RngStream rng(CounterRng(32).split(1));
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n_k = static_cast<std::size_t>(trial % 4);
        const auto spec = verify::random_recipe_spec(rng, n_k);
        const auto c = make_subframe_frame(spec);
        const auto d = subframe::classify_supports(c.family, c.ground_truth.g);
        EXPECT_EQ(d.g, c.ground_truth.g);
        EXPECT_EQ(d.h, c.ground_truth.h);
        EXPECT_EQ(d.k, c.ground_truth.k);
        EXPECT_EQ(d.k.size(), n_k);
        EXPECT_LE(d.m0, spec.m);
        for (const auto& [h1, h2] : c.ground_truth.h_split) EXPECT_LT(h1.head(static_cast<Eigen::Index>(spec.m)).norm(), 1e-10);
    }
}

TEST(MakeSubframeFrame, NoFullSupportVectorsKeepsSubframeProperty) {
    RngStream rng(CounterRng(33).split(1));
    for (int trial = 0; trial < 15; ++trial) {
        const auto spec = verify::random_recipe_spec(rng, 0, 9);
        const auto c = make_subframe_frame(spec);
        if (c.family.size() > 16) continue;
        EXPECT_GT(subframe::riesz_frame_bound(c.family).riesz_lower, 1e-12);
    }
}

TEST(MakeSubframeFrame, Limits) {
    EXPECT_EQ(code_of(recipe(8, 1, 1, 4)), ErrorCode::infeasible_spec);
    auto s = recipe(12, 0, 1, 1);
    s.tail_decay = 0.01;
    EXPECT_EQ(code_of(s), ErrorCode::infeasible_spec);
}

TEST(MakeFailingFamily, ColumnWindowAndWitness) {
    const auto c = make_failing_family(failing(8, 0, 0.7));
    ASSERT_TRUE(c.designed_failure.has_value());
    const auto& f = *c.designed_failure;
    EXPECT_EQ(c.ground_truth.k.size(), 4u);
    ASSERT_EQ(f.column_sums.size(), 4u);
    for (std::size_t m = 1; m <= 4; ++m) {
        const auto row = static_cast<Eigen::Index>(f.designated_coordinates[m - 1]);
        double direct = 0.0;
        for (std::size_t n : c.ground_truth.k) {
            const double x = c.family.matrix()(row, static_cast<Eigen::Index>(n));
            EXPECT_NE(x, 0.0);
            direct += x * x;
        }
        EXPECT_GT(direct, 0.0);
        EXPECT_LT(direct, 1.0 / static_cast<double>(m));
        EXPECT_NEAR(direct, f.column_sums[m - 1], 1e-15);
    }
    EXPECT_DOUBLE_EQ(f.bound_ceiling, 0.25);
    const double measured = optimal_bounds(c.family.subfamily(f.subset), BoundsKind::frame_sequence).lower;
    EXPECT_EQ(measured, f.measured_lower);
    EXPECT_LT(measured, f.bound_ceiling);
    EXPECT_DOUBLE_EQ(subframe::riesz_frame_bound(c.family.subfamily(c.ground_truth.g)).riesz_lower, 1.0);
}

TEST(MakeFailingFamily, WitnessDecreasesWithMoreColumns) {
    const double a = make_failing_family(failing(8, 2, 0.7)).designed_failure->measured_lower;
    const double b = make_failing_family(failing(8, 4, 0.7)).designed_failure->measured_lower;
    const double c = make_failing_family(failing(16, 8, 0.7)).designed_failure->measured_lower;
    EXPECT_GT(a, b);
    EXPECT_GT(b, c);
}

TEST(MakeFailingFamily, Limits) {
    EXPECT_EQ(code_of(failing(6, 0, 0.7)), ErrorCode::infeasible_spec);
    EXPECT_EQ(code_of(failing(8, 5, 0.7)), ErrorCode::infeasible_spec);
}

TEST(Construct, Deterministic) {
    RngStream rng(CounterRng(34).split(1));
    for (int trial = 0; trial < 20; ++trial) {
        auto spec = verify::random_block_spec(rng);
        EXPECT_EQ(construct(spec).family, construct(spec).family);
        const auto before = construct(spec).family;
        spec.seed += 1;
        if (spec.A < spec.B) EXPECT_FALSE(construct(spec).family == before);
    }
}

TEST(UnionOnComplements, DimensionMismatch) {
    const auto p = OrthoProjector::coordinate(3, IndexSet({0}));
    EXPECT_THROW(union_on_complements(test::family({{1, 0}}), test::family({{0, 1}}), p), Error);
}

}  // namespace
}  // namespace framekit::constructions
