#include "fuzz.hpp"
#include "lipgeo/oracle.hpp"
#include "lipgeo/pizza.hpp"
#include "lipgeo/pizza_extract.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lipgeo;

namespace {

const Exponent inf = Exponent::infinity();
const WidthFunction identity{1, 0};

Expr absdiff() { return abs(Expr::w() - Expr::u(2)); }

AbstractPizza one(const PizzaSlice& s, Exponent beta = 1) { return {{s}, beta}; }

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

Arc planar3(const Series& y, const Series& z) { return Arc({Series::monomial(1, 1), y, z}, Parameterization::coordinate, 0); }

}  // namespace

TEST(Validate, SpecExamples) {
    EXPECT_TRUE(validate(one(PizzaSlice::affine(inf, 1, identity))).empty());
    auto shifted = validate(one(PizzaSlice::affine(inf, 1, {1, 1})));
    EXPECT_TRUE(mentions(shifted, "mu(q)<=q fails"));
    PizzaSlice flat{2, 3, 1, {0, 1}};
    EXPECT_TRUE(mentions(validate(one(flat)), "non-constant"));
}

TEST(Validate, ChainingAndBounds) {
    AbstractPizza broken{{PizzaSlice::affine(2, 3, identity), PizzaSlice::affine(4, 5, identity)}, 1};
    EXPECT_TRUE(mentions(validate(broken), "does not match"));
    EXPECT_TRUE(mentions(validate(one(PizzaSlice::point(1, 1), 2)), "below the triangle"));
    EXPECT_TRUE(mentions(validate(AbstractPizza{}), "no slices"));
}

TEST(Minimalize, MergesMonotoneRun) {
    AbstractPizza p{{PizzaSlice::affine(2, 3, identity), PizzaSlice::affine(3, inf, identity)}, 1};
    auto m = minimalize(p);
    ASSERT_EQ(m.slices.size(), 1u);
    EXPECT_EQ(m.slices[0], PizzaSlice::affine(2, inf, identity));
}

TEST(Minimalize, KeepsNonMonotonePair) {
    AbstractPizza p{{PizzaSlice::affine(2, inf, identity), PizzaSlice::affine(inf, 1, identity)}, 1};
    EXPECT_EQ(minimalize(p), p);
}

TEST(Minimalize, RejectsInvalidInput) {
    EXPECT_THROW(minimalize(one(PizzaSlice::affine(inf, 1, {1, 1}))), std::invalid_argument);
}

TEST(Equivalent, SpecExamples) {
    AbstractPizza p{{PizzaSlice::affine(2, inf, identity), PizzaSlice::affine(inf, 1, identity)}, 1};
    EXPECT_TRUE(equivalent(p, p));
    EXPECT_TRUE(equivalent(p, reversed(p), false));
    EXPECT_FALSE(equivalent(p, reversed(p), true));
    EXPECT_FALSE(equivalent(one(PizzaSlice::affine(1, inf, identity)), one(PizzaSlice::affine(2, inf, identity))));
}

TEST(Extract, AbsDiffTwoSlices) {
    auto e = extract_pizza(absdiff(), 1);
    AbstractPizza expected{{PizzaSlice::affine(2, inf, identity), PizzaSlice::affine(inf, 1, identity)}, 1};
    EXPECT_EQ(e.pizza, expected);
    EXPECT_EQ(e.pizza.slices[0].beta, Exponent(2));
    EXPECT_EQ(e.pizza.slices[1].beta, Exponent(1));
    ASSERT_TRUE(e.slices[0].support);
    EXPECT_EQ(*e.slices[0].support, Series::monomial(1, 2));
}

TEST(Extract, LinearOneSlice) {
    auto e = extract_pizza(Expr::w(), 1);
    EXPECT_EQ(e.pizza, one(PizzaSlice::affine(inf, 1, identity)));
    EXPECT_EQ(e.pizza.slices[0].supporting_end(), SupportingEnd::in);
    EXPECT_EQ(*e.slices[0].support, Series::zero());
}

TEST(Extract, PointPizza) {
    auto e = extract_pizza(Expr::u(), 2);
    EXPECT_EQ(e.pizza, one(PizzaSlice::point(1, 2), 2));
    EXPECT_EQ(e.pizza.slices[0].supporting_end(), SupportingEnd::none);
}

TEST(Extract, WidthAtArc) {
    auto e = extract_pizza(absdiff(), 1);
    EXPECT_EQ(width_at_arc(e, Arc::planar(Series::monomial(1, 2) - Series::monomial(1, 3))), Exponent(3));
    EXPECT_EQ(width_at_arc(e, Arc::planar(Series::zero())), Exponent(2));
    EXPECT_EQ(width_at_arc(e, Arc::planar(Series::monomial(1, 1))), Exponent(1));
    EXPECT_EQ(width_at_arc(Expr::u(), 2, Arc::planar(Series::monomial(1, 3))), Exponent(2));
    EXPECT_THROW(width_at_arc(e, Arc::planar(Series::monomial(2, 1))), ArcError);
}

TEST(Extract, IrrationalCenterFailsExplicitly) {
    auto f = abs(Expr::w() * Expr::w() - Expr::mono(2, 4, 0));
    EXPECT_THROW(extract_pizza(f, 1), NonAdmissibleError);
}

TEST(Extract, FractionalWExponentRejected) {
    EXPECT_THROW(extract_pizza(Expr::w(Rational(1, 2)), 1), NonAdmissibleError);
}

TEST(Extract, OracleAgreesOnScannedArcs) {
    for (const auto& [f, beta] : std::vector<std::pair<Expr, Rational>>{{absdiff(), 1}, {Expr::w(), 1}, {Expr::u(), 2}}) {
        auto e = extract_pizza(f, beta);
        ASSERT_FALSE(e.scanned.empty());
        for (const auto& s : e.scanned) {
            auto n = numeric_order_on_arc(f, s.w);
            if (s.order.is_infinite()) {
                EXPECT_TRUE(n.infinite) << s.w.str();
            } else {
                EXPECT_FALSE(n.infinite) << s.w.str();
                EXPECT_NEAR(n.fit.exponent, to_double(s.order.value()), 0.05) << f.str() << " on " << s.w.str();
            }
        }
    }
}

TEST(TwoTriangle, GraphOfSmallFunction) {
    TriangleSample t{planar3(Series::zero(), Series::zero()), planar3(Series::monomial(1, 1), Series::zero()),
                     {planar3(Series::monomial(Rational(1, 2), 1), Series::zero())}};
    auto z = Series::monomial(1, 2);
    TriangleSample graph{planar3(Series::zero(), z), planar3(Series::monomial(1, 1), z),
                         {planar3(Series::monomial(Rational(1, 2), 1), z)}};
    EXPECT_TRUE(check_two_triangle_condition(t, graph).holds);
    EXPECT_TRUE(check_two_triangle_condition(t, t).holds);

    TriangleSample swapped{graph.second, graph.first, graph.interior};
    auto r = check_two_triangle_condition(t, swapped);
    EXPECT_FALSE(r.holds);
    EXPECT_FALSE(r.failures.empty());
    EXPECT_THROW(check_two_triangle_condition(TriangleSample{t.first, t.second, {}}, t), std::invalid_argument);
}

TEST(Properties, RandomAdmissibleFunctions) {
    fuzz::Rng rng(7);
    int extracted = 0;
    for (int i = 0; i < 60; ++i) {
        Rational beta = std::vector<Rational>{1, Rational(3, 2), 2}[fuzz::uniform(rng, 0, 2)];
        Expr f = fuzz::random_admissible(rng, beta);
        SCOPED_TRACE(f.str() + " on T_" + to_string(beta));
        auto e = extract_pizza(f, beta);
        ++extracted;
        EXPECT_TRUE(validate(e.pizza).empty());
        EXPECT_EQ(minimalize(e.pizza), e.pizza);

        // Orders seen on the scan form one closed interval, and every slice's Q is inside it.
        Exponent lo = inf, hi = 0;
        for (const auto& s : e.scanned) {
            lo = min(lo, s.order);
            hi = max(hi, s.order);
        }
        for (const auto& s : e.pizza.slices) {
            EXPECT_GE(s.q_min(), lo);
            EXPECT_LE(s.q_max(), hi);
        }
        Exponent qlo = inf, qhi = 0;
        for (const auto& s : e.pizza.slices) {
            qlo = min(qlo, s.q_min());
            qhi = max(qhi, s.q_max());
        }
        EXPECT_EQ(qlo, lo);
        EXPECT_EQ(qhi, hi);

        // Width never exceeds the order on a scanned arc.
        for (const auto& s : e.scanned) {
            if (!detail::in_triangle(s.w, beta)) continue;
            EXPECT_LE(width_at_arc(e, Arc::planar(s.w)), s.order) << s.w.str();
        }

        Rational c(fuzz::uniform(rng, 1, 7), fuzz::uniform(rng, 1, 5));
        EXPECT_EQ(extract_pizza(scaled(f, c), beta).pizza, e.pizza);

        auto swapped = extract_pizza(compose_boundary_swap(f, beta), beta).pizza;
        EXPECT_EQ(swapped, reversed(e.pizza));
        EXPECT_TRUE(equivalent(swapped, e.pizza, false));
    }
    EXPECT_EQ(extracted, 60);
}

TEST(Properties, MinimalizeIdempotentOnRandomPizzas) {
    fuzz::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        auto p = fuzz::random_pizza(rng);
        ASSERT_TRUE(validate(p).empty()) << io::to_json(p).dump();
        auto m = minimalize(p);
        EXPECT_TRUE(validate(m).empty());
        EXPECT_EQ(minimalize(m), m);
        EXPECT_EQ(minimalize(fuzz::refine(p)), m);
    }
}

TEST(Properties, EquivalenceRelation) {
    fuzz::Rng rng(13);
    std::vector<AbstractPizza> corpus;
    for (int i = 0; i < 40; ++i) {
        auto p = fuzz::random_pizza(rng);
        corpus.push_back(p);
        corpus.push_back(fuzz::refine(p));
        corpus.push_back(reversed(p));
    }
    for (bool oriented : {true, false}) {
        for (const auto& a : corpus) {
            EXPECT_TRUE(equivalent(a, a, oriented));
            for (const auto& b : corpus) {
                bool ab = equivalent(a, b, oriented);
                EXPECT_EQ(ab, equivalent(b, a, oriented));
                if (!ab) continue;
                for (const auto& c : corpus)
                    if (equivalent(b, c, oriented)) EXPECT_TRUE(equivalent(a, c, oriented));
            }
        }
    }
}

TEST(Json, RoundTrip) {
    auto p = extract_pizza(absdiff(), 1).pizza;
    auto j = io::to_json(p);
    EXPECT_EQ(j["slices"][0]["q_out"], "inf");
    EXPECT_EQ(io::pizza_from_json(j), p);
    auto point = io::pizza_from_json(io::json::parse(R"({"triangle_beta":"2","slices":[{"q_in":"1","q_out":"1","beta":"2"}]})"));
    EXPECT_EQ(point, one(PizzaSlice::point(1, 2), 2));
    EXPECT_THROW(io::pizza_from_json(io::json::parse(R"({"slices":[{"q_in":"1","q_out":"2","beta":"1"}]})")), ParseError);
}
