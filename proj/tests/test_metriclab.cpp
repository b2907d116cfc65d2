#include "fuzz.hpp"
#include "lipgeo/complex.hpp"
#include "lipgeo/metriclab.hpp"
#include "lipgeo/metriclab_io.hpp"
#include "lipgeo/realize.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lipgeo;

namespace {

const SamplePlan plan;

std::vector<std::pair<double, double>> sampled(double (*f)(double), const std::vector<double>& ts) {
    std::vector<std::pair<double, double>> out;
    for (double t : ts) out.emplace_back(t, f(t));
    return out;
}

// Two thin triangles leaving the origin in the directions (1,0,0) and (1,1,0).
GermModel transversal_triangles() {
    GermModel m;
    m.dim = 3;
    m.axis = 0;
    for (double y : {0.0, 1.0}) {
        Patch p;
        p.coords = {{{Rational(1), PiecewiseLinear::constant(1.0)}},
                    {{Rational(1), PiecewiseLinear::constant(y)}},
                    {{Rational(2), PiecewiseLinear::linear(0.0, 1.0)}}};
        m.patches.push_back(p);
    }
    m.validate();
    return m;
}

}  // namespace

TEST(EstimateOrder, SpecExamples) {
    auto ts = geometric_levels(-6, -18, 7);
    auto e = estimate_order(sampled([](double t) { return 5 * std::pow(t, 1.5); }, ts));
    EXPECT_NEAR(e.exponent, 1.5, 1e-6);
    EXPECT_NEAR(estimate_order(sampled([](double t) { return t * t + t * t * t; }, ts)).exponent, 2.0, 0.05);
    EXPECT_NEAR(estimate_order(sampled([](double) { return 3.0; }, ts)).exponent, 0.0, 0.01);
    EXPECT_THROW(estimate_order(sampled([](double) { return 0.0; }, ts)), std::domain_error);
    EXPECT_THROW(estimate_order({{0.1, 1}, {0.2, 1}, {0.3, 1}}), std::invalid_argument);
}

TEST(EstimateOrder, ExactOnMonomials) {
    auto ts = geometric_levels(-6, -18, 7);
    for (double q : {1.0, 1.25, 2.0, 3.5, 7.0}) {
        std::vector<std::pair<double, double>> s;
        for (double t : ts) s.emplace_back(t, 0.3 * std::pow(t, q));
        EXPECT_NEAR(estimate_order(s).exponent, q, 1e-6);
    }
}

TEST(SampleLink, HornCircle) {
    auto h = horn_model(2);
    auto chains = sample_link(h, 0.1, plan);
    ASSERT_EQ(chains.size(), 1u);
    for (const auto& p : chains[0].points) {
        EXPECT_DOUBLE_EQ(p[2], 0.1);
        double r = std::hypot(p[0], p[1]);
        EXPECT_LE(r, 0.01 * (1 + 1e-6));
        EXPECT_GE(r, 0.01 * (1 - 0.003));  // 48-gon with rational vertices
    }
    EXPECT_THROW(sample_link(h, 0.0, plan), ModelError);
    EXPECT_THROW(sample_link(h, 2.0, plan), ModelError);
}

TEST(SampleLink, TriangleAndBigon) {
    auto chains = sample_link(triangle_model(Rational(3, 2)), 0.25, plan);
    ASSERT_EQ(chains.size(), 1u);
    EXPECT_DOUBLE_EQ(chains[0].points.front()[1], 0.0);
    EXPECT_NEAR(chains[0].points.back()[1], std::pow(0.25, 1.5), 1e-15);
    auto tri = link_components(triangle_model(2), 0.25, plan);
    ASSERT_EQ(tri.size(), 1u);
    EXPECT_FALSE(tri[0].closed);

    auto bigon = realize_model(fuzz::cycle({2, 3})).model;
    auto comps = link_components(bigon, 0.125, plan);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_TRUE(comps[0].closed);
    EXPECT_LT(euclid(comps[0].points.front(), comps[0].points.back()), 1e-15);
}

TEST(Distance, CuspBranches) {
    auto c = cusp_model();
    for (double t : plan.levels) {
        EXPECT_NEAR(distance(c, {0, 0}, {1, 0}, DistanceMode::outer, t, plan) / (2 * std::pow(t, 1.5)), 1.0, 1e-9);
        EXPECT_NEAR(distance(c, {0, 0}, {1, 0}, DistanceMode::inner, t, plan) / (2 * t), 1.0, 0.05);
    }
}

TEST(Distance, HornRatioBoundedAndZeroOnDiagonal) {
    auto h = horn_model(Rational(3, 2));
    for (double t : plan.levels) {
        double o = distance(h, {0, 0}, {0, 0.5}, DistanceMode::outer, t, plan);
        double i = distance(h, {0, 0}, {0, 0.5}, DistanceMode::inner, t, plan);
        EXPECT_GE(i, o);
        EXPECT_LT(i / o, 2.0);
    }
    PancakeDecomposition d{{{0}}, {Rational(3, 2)}};
    for (auto mode : {DistanceMode::outer, DistanceMode::inner, DistanceMode::pancake})
        EXPECT_EQ(distance(h, {0, 0.3}, {0, 0.3}, mode, 0.01, plan, &d), 0.0) << to_string(mode);
    EXPECT_THROW(distance(h, {0, 0}, {0, 0.5}, DistanceMode::pancake, 0.01, plan), ModelError);
}

TEST(Distance, PancakeComparableToInner) {
    auto h = split_horn_model(2, 4);
    PancakeDecomposition d{{{0}, {1}, {2}, {3}}, {2, 2, 2, 2}};
    double lo = 1e300, hi = 0;
    for (double t : plan.levels) {
        double i = distance(h, {0, 0.5}, {2, 0.5}, DistanceMode::inner, t, plan);
        double p = distance(h, {0, 0.5}, {2, 0.5}, DistanceMode::pancake, t, plan, &d);
        lo = std::min(lo, p / i);
        hi = std::max(hi, p / i);
    }
    EXPECT_GT(lo, 0.5);
    EXPECT_LT(hi, 2.0);
    EXPECT_LT(hi / lo, 1.05);
}

TEST(Distance, RefinementNeverLengthens) {
    auto m = realize_model(fuzz::cycle({2, Rational(5, 2), 3})).model;
    for (double t : {1.0 / 64, 1.0 / 1024}) {
        double prev = 1e300;
        for (int res : {8, 16, 32, 64}) {
            SamplePlan p = plan;
            p.resolution = res;
            double d = distance(m, {0, 0.3}, {2, 0.6}, DistanceMode::inner, t, p);
            EXPECT_LE(d, prev * (1 + 1e-12));
            prev = d;
        }
    }
}

TEST(Tangency, AgreesWithSymbolicOrder) {
    auto m = triangle_model(2);
    auto g1 = m.patches[0].arc_at(0, 0), g2 = m.patches[0].arc_at(1, 0);
    ASSERT_EQ(arc_tord(g1, g2), Exponent(2));
    auto e = tangency_numeric(m, g1, g2, DistanceMode::outer, plan);
    EXPECT_NEAR(e.exponent(), 2.0, 0.05);
    EXPECT_TRUE(tangency_numeric(m, g1, g1, DistanceMode::outer, plan).infinite);
    Arc off({Series::monomial(1, 1), Series::monomial(2, 1)}, Parameterization::coordinate, 0);
    EXPECT_THROW(tangency_numeric(m, g1, off, DistanceMode::outer, plan), ModelError);
}

TEST(Tangency, CuspInnerBelowOuter) {
    auto c = cusp_model();
    EXPECT_NEAR(tangency_numeric(c, {0, 0}, {1, 0}, DistanceMode::outer, plan).exponent(), 1.5, 0.05);
    EXPECT_NEAR(tangency_numeric(c, {0, 0}, {1, 0}, DistanceMode::inner, plan).exponent(), 1.0, 0.05);
}

TEST(Tangency, InnerNeverExceedsOuterOnRandomModels) {
    fuzz::Rng rng(5);
    for (int i = 0; i < 6; ++i) {
        auto m = realize_model(fuzz::random_complex(rng, 4, 5, 2)).model;
        std::vector<PointRef> refs;
        for (int k = 0; k < 4; ++k)
            refs.push_back({static_cast<std::size_t>(fuzz::uniform(rng, 0, static_cast<int>(m.patches.size()) - 1)),
                            fuzz::uniform(rng, 0, 8) / 8.0});
        auto o = pairwise_orders(m, refs, plan);
        for (std::size_t a = 0; a < refs.size(); ++a)
            for (std::size_t b = a + 1; b < refs.size(); ++b)
                if (!o.outer[a][b].infinite) EXPECT_LE(o.inner[a][b].exponent(), o.outer[a][b].exponent() + plan.tol);
    }
}

TEST(Lne, HornsPass) {
    for (Rational beta : {Rational(1), Rational(3, 2), Rational(2)}) {
        auto h = horn_model(beta);
        auto arcs = sample_arcs(h, 12);
        arcs.pop_back();  // s = 1 is glued to s = 0
        auto r = lne_report(h, arcs, LneMode::full, std::nullopt, plan);
        EXPECT_EQ(r.pairs.size(), 66u);
        EXPECT_TRUE(r.passes()) << to_string(beta);
    }
}

TEST(Lne, CuspFailsWithWitness) {
    auto c = cusp_model();
    auto r = lne_report(c, sample_arcs(c, 1), LneMode::full, std::nullopt, plan);
    ASSERT_EQ(r.violations().size(), 1u);
    EXPECT_NEAR(r.violations()[0].outer.exponent(), 1.5, 0.05);
    EXPECT_NEAR(r.violations()[0].inner.exponent(), 1.0, 0.05);

    EXPECT_TRUE(lne_report(c, sample_arcs(c, 1), LneMode::weak, Exponent(1), plan).passes());
    EXPECT_FALSE(lne_report(c, sample_arcs(c, 1), LneMode::weak, Exponent(Rational(3, 2)), plan).passes());
    EXPECT_THROW(lne_report(c, sample_arcs(c, 1), LneMode::weak, std::nullopt, plan), ModelError);
    EXPECT_THROW(lne_report(c, {{0, 0}}, LneMode::full, std::nullopt, plan), ModelError);
}

TEST(Pancake, SplitHornNotMinimal) {
    auto r = pancake_check(split_horn_model(2, 4), {{{0}, {1}, {2}, {3}}, {2, 2, 2, 2}}, plan);
    EXPECT_TRUE(r.valid);
    EXPECT_FALSE(r.minimal);
    EXPECT_EQ(r.verdict(), "valid but NOT minimal");
    EXPECT_EQ(r.adjacent.size(), 4u);
}

TEST(Pancake, CuspBranchesMinimal) {
    auto r = pancake_check(cusp_model(), {{{0}, {1}}, {Exponent::infinity(), Exponent::infinity()}}, plan);
    EXPECT_EQ(r.verdict(), "valid and minimal");
}

TEST(Pancake, Errors) {
    auto h = split_horn_model(2, 4);
    EXPECT_THROW(pancake_check(h, {{{0, 1}, {1, 2, 3}}, {2, 2}}, plan), ModelError);
    EXPECT_THROW(pancake_check(h, {{{0}, {1}}, {2, 2}}, plan), ModelError);
    EXPECT_THROW(pancake_check(split_horn_model(2, 2), {{{0}, {1}}, {2, 2}}, plan), ModelError);
    auto wrong = pancake_check(h, {{{0}, {1}, {2}, {3}}, {2, 3, 2, 2}}, plan);
    EXPECT_FALSE(wrong.valid);
    EXPECT_EQ(wrong.verdict(), "invalid");
}

TEST(Projection, GenericPlanesSeeTheHornExponent) {
    auto h = horn_model(2);
    auto r = projection_experiment(h, 2, 100, 1, plan);
    EXPECT_GE(r.within, 95u);
    Plane xy{{1, 0, 0}, {0, 1, 0}};
    EXPECT_NEAR(projected_min_tord(h, sample_arcs(h, 4), xy, plan), 1.0, 0.05);
    auto cone = projection_experiment(horn_model(1), 1, 20, 3, plan);
    EXPECT_EQ(cone.within, 20u);
    EXPECT_THROW(projection_experiment(cusp_model(), 1, 5, 0, plan), ModelError);
}

TEST(TangentCone, HornDecay) {
    for (Rational beta : {Rational(3, 2), Rational(2)}) {
        auto r = tangent_cone_sample(horn_model(beta), plan);
        EXPECT_EQ(r.rays, 1u);
        ASSERT_TRUE(r.decay);
        EXPECT_NEAR(r.decay->exponent(), to_double(beta) - 1, 0.05);
    }
    auto cone = tangent_cone_sample(horn_model(1), plan);
    EXPECT_FALSE(cone.decay);
    EXPECT_LT(cone.levels.back().hausdorff, cone.mesh_tolerance);
}

TEST(TangentCone, RaysAndInvariance) {
    EXPECT_EQ(tangent_cone_sample(transversal_triangles(), plan).rays, 2u);
    auto c = fuzz::cycle({2, 3, 5});
    auto same = fuzz::cycle({2, 3, 5, 7});
    ASSERT_TRUE(equivalent(c, same).equivalent);
    EXPECT_EQ(tangent_cone_sample(realize_model(c).model, plan).rays,
              tangent_cone_sample(realize_model(same).model, plan).rays);
}

TEST(HornExponent, Numeric) {
    EXPECT_NEAR(horn_exponent_numeric(horn_model(2), plan).exponent(), 2.0, 0.05);
    auto c = fuzz::cycle({2, 3, 5});
    EXPECT_NEAR(horn_exponent_numeric(realize_model(c).model, plan).exponent(), to_double(horn_exponent(c).value()), 0.05);
    EXPECT_THROW(horn_exponent_numeric(triangle_model(2), plan), ModelError);
}

TEST(Reports, DeterministicJsonAndSvg) {
    auto run = [] { return io::to_json(projection_experiment(horn_model(2), 2, 10, 9, plan)).dump(); };
    EXPECT_EQ(run(), run());
    auto c = cusp_model();
    auto j = io::to_json(lne_report(c, sample_arcs(c, 1), LneMode::full, std::nullopt, plan));
    EXPECT_FALSE(j["passes"].get<bool>());
    EXPECT_EQ(j["violations"].size(), 1u);
    auto t = io::to_json(tangent_cone_sample(horn_model(1), plan));
    EXPECT_EQ(t["decay_exponent"], "converged");
    auto svg = link_svg(horn_model(1), {0.01}, plan, 0, 1);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("x0 / t"), std::string::npos);
}
