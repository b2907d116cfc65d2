#include "fuzz.hpp"
#include "lipgeo/complex.hpp"
#include "lipgeo/complex_io.hpp"
#include "lipgeo/realize.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace lipgeo;

namespace {

HolderComplex path(const Rational& b1, const Rational& b2) {
    return HolderComplex({"v1", "v0", "v2"}, {{"g1", "v1", "v0", b1}, {"g2", "v0", "v2", b2}});
}

HolderComplex bigon(const Rational& b1, const Rational& b2) {
    return HolderComplex({"v0", "v1"}, {{"g1", "v0", "v1", b1}, {"g2", "v0", "v1", b2}});
}

// Subdivides one edge (beta) into (beta, beta') with beta' >= beta through a fresh vertex.
HolderComplex subdivide(const HolderComplex& c, std::size_t k, const Rational& extra) {
    auto specs = c.edge_specs();
    auto names = c.vertices();
    std::string mid = "sub" + std::to_string(names.size());
    names.push_back(mid);
    EdgeSpec e = specs[k];
    specs[k] = {e.id, e.a, mid, e.beta};
    specs.push_back({e.id + "'", mid, e.b, e.beta + extra});
    return HolderComplex(names, specs);
}

}  // namespace

TEST(ClassifyVertex, Examples) {
    auto p = path(2, 3);
    EXPECT_EQ(classify_vertex(p, "v0"), VertexClass::non_critical);
    EXPECT_EQ(classify_vertex(p, "v1"), VertexClass::critical);
    EXPECT_EQ(classify_vertex(bigon(2, 3), "v0"), VertexClass::loop);
    EXPECT_THROW(classify_vertex(p, "nope"), ComplexError);
    HolderComplex star({"c", "a", "b", "d"}, {{"x", "c", "a", 1}, {"y", "c", "b", 1}, {"z", "c", "d", 1}});
    EXPECT_EQ(classify_vertex(star, "c"), VertexClass::critical);
}

TEST(HolderComplexValidation, RejectsBadInput) {
    EXPECT_THROW(HolderComplex({"a"}, {{"g", "a", "a", 1}}), ComplexError);
    EXPECT_THROW(HolderComplex({"a", "b"}, {{"g", "a", "b", Rational(1, 2)}}), ComplexError);
    EXPECT_THROW(HolderComplex({"a", "b", "c"}, {{"g", "a", "b", 1}}), ComplexError);
    EXPECT_THROW(HolderComplex({"a", "b"}, {{"g", "a", "b", 1}, {"g", "a", "b", 2}}), ComplexError);
    EXPECT_THROW(HolderComplex({"a", "b"}, {{"g", "a", "z", 1}}), ComplexError);
}

TEST(Canonicalize, PathMergesWithMin) {
    auto c = canonicalize(path(2, 3));
    ASSERT_EQ(c.edge_count(), 1u);
    EXPECT_EQ(c.edges()[0].beta, 2);
    EXPECT_EQ(c.vertices(), (std::vector<std::string>{"v1", "v2"}));
    EXPECT_EQ(c.edges()[0].id, "g1");
}

TEST(Canonicalize, LoopRuleTakesMin) {
    auto c = canonicalize(bigon(Rational(3, 2), 2));
    ASSERT_EQ(c.edge_count(), 2u);
    EXPECT_EQ(c.edges()[0].beta, Rational(3, 2));
    EXPECT_EQ(c.edges()[1].beta, Rational(3, 2));
}

TEST(Canonicalize, TriangleCycleBecomesBigon) {
    auto c = canonicalize(fuzz::cycle({2, 3, 5}));
    EXPECT_EQ(c.vertex_count(), 2u);
    ASSERT_EQ(c.edge_count(), 2u);
    for (const auto& e : c.edges()) EXPECT_EQ(e.beta, 2);
    for (std::size_t v = 0; v < 2; ++v) EXPECT_EQ(classify_vertex(c, v), VertexClass::loop);
}

TEST(IsCanonical, NamesViolations) {
    EXPECT_TRUE(is_canonical(canonicalize(fuzz::cycle({2, 3, 5}))).canonical);
    auto p = is_canonical(path(2, 3));
    EXPECT_FALSE(p.canonical);
    ASSERT_EQ(p.violations.size(), 1u);
    EXPECT_NE(p.violations[0].find("'v0'"), std::string::npos);
    auto b = is_canonical(bigon(2, 3));
    EXPECT_FALSE(b.canonical);
    EXPECT_NE(b.violations[0].find("'g1'"), std::string::npos);
    EXPECT_NE(b.violations[0].find("'g2'"), std::string::npos);
}

TEST(Equivalent, Examples) {
    fuzz::Rng rng(1);
    auto c = fuzz::random_complex(rng);
    auto r = equivalent(c, fuzz::relabel(c, rng));
    EXPECT_TRUE(r.equivalent);
    ASSERT_TRUE(r.witness);
    EXPECT_FALSE(equivalent(HolderComplex({"a", "b"}, {{"g", "a", "b", 2}}), HolderComplex({"a", "b"}, {{"g", "a", "b", 3}})).equivalent);
    EXPECT_TRUE(equivalent(fuzz::cycle({2, 3, 5}), fuzz::cycle({2, 7, 9, 11})).equivalent);
    EXPECT_FALSE(equivalent(fuzz::cycle({2, 3, 5}), fuzz::cycle({3, 7, 9, 11})).equivalent);
}

TEST(Equivalent, WitnessPreservesLabels) {
    fuzz::Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        auto c = canonicalize(fuzz::random_complex(rng));
        auto d = fuzz::relabel(c, rng);
        auto iso = find_isomorphism(c, d);
        ASSERT_TRUE(iso);
        for (const auto& e : c.edges()) {
            std::size_t k = 0;
            while (d.edges()[k].id != iso->edges.at(e.id)) ++k;
            const auto& img = d.edges()[k];
            EXPECT_EQ(img.beta, e.beta);
            std::set<std::string> want{iso->vertices.at(c.vertices()[e.a]), iso->vertices.at(c.vertices()[e.b])};
            std::set<std::string> got{d.vertices()[img.a], d.vertices()[img.b]};
            EXPECT_EQ(want, got);
        }
    }
}

TEST(Equivalent, DisconnectedComparedByComponents) {
    HolderComplex a({"a", "b", "c", "d"}, {{"x", "a", "b", 2}, {"y", "c", "d", 3}});
    HolderComplex b({"p", "q", "r", "s"}, {{"x", "r", "s", 2}, {"y", "p", "q", 3}});
    HolderComplex c({"p", "q", "r", "s"}, {{"x", "r", "s", 2}, {"y", "p", "q", 2}});
    EXPECT_TRUE(equivalent(a, b).equivalent);
    EXPECT_FALSE(equivalent(a, c).equivalent);
}

TEST(Equivalent, Deterministic) {
    fuzz::Rng rng(9);
    auto c = fuzz::random_complex(rng);
    auto d = fuzz::relabel(c, rng);
    auto w1 = equivalent(c, d).witness;
    auto w2 = equivalent(c, d).witness;
    ASSERT_TRUE(w1 && w2);
    EXPECT_EQ(w1->vertices, w2->vertices);
    EXPECT_EQ(w1->edges, w2->edges);
}

TEST(CanonicalizeProperties, IdempotentConfluentTopological) {
    fuzz::Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        auto c = fuzz::random_complex(rng);
        auto k = canonicalize(c);
        EXPECT_TRUE(is_canonical(k).canonical);
        EXPECT_EQ(canonicalize(k), k);
        EXPECT_EQ(k.component_count(), c.component_count());
        EXPECT_EQ(k.cycle_rank(), c.cycle_rank());
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            auto other = canonicalize(c, {seed + 100 * static_cast<std::uint64_t>(i)});
            EXPECT_TRUE(find_isomorphism(k, other).has_value());
        }
    }
}

TEST(CanonicalizeProperties, SubdivisionInvariance) {
    fuzz::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        auto c = fuzz::random_complex(rng);
        auto k = static_cast<std::size_t>(fuzz::uniform(rng, 0, static_cast<int>(c.edge_count()) - 1));
        auto d = subdivide(c, k, Rational(fuzz::uniform(rng, 0, 6), fuzz::uniform(rng, 1, 3)));
        EXPECT_TRUE(equivalent(c, d).equivalent);
    }
}

TEST(EquivalentProperties, EquivalenceRelation) {
    fuzz::Rng rng(8);
    std::vector<HolderComplex> corpus;
    for (int i = 0; i < 20; ++i) {
        auto c = fuzz::random_complex(rng, 6, 8, 1);
        corpus.push_back(c);
        corpus.push_back(fuzz::relabel(c, rng));
    }
    const std::size_t n = corpus.size();
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) eq[i][j] = equivalent(corpus[i], corpus[j]).equivalent;
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_TRUE(eq[i][i]);
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_EQ(eq[i][j], eq[j][i]);
            for (std::size_t k = 0; k < n; ++k)
                if (eq[i][j] && eq[j][k]) EXPECT_TRUE(eq[i][k]);
        }
    }
}

TEST(HornExponent, Examples) {
    EXPECT_EQ(horn_exponent(fuzz::cycle({2, 3, 5})), Exponent(2));
    EXPECT_EQ(horn_exponent(fuzz::cycle({1, 1})), Exponent(1));
    EXPECT_THROW(horn_exponent(path(2, 3)), ComplexError);
    HolderComplex two({"a", "b", "c", "d"}, {{"1", "a", "b", 2}, {"2", "a", "b", 2}, {"3", "c", "d", 2}, {"4", "c", "d", 2}});
    EXPECT_THROW(horn_exponent(two), ComplexError);
}

TEST(HornExponent, MatchesCanonicalBigon) {
    fuzz::Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        auto c = fuzz::random_cycle(rng, 10, 4);
        auto h = horn_exponent(c);
        auto k = canonicalize(c);
        for (const auto& e : k.edges()) EXPECT_EQ(Exponent(e.beta), h);
    }
}

TEST(ComplexJson, RoundTripAndErrors) {
    fuzz::Rng rng(6);
    auto c = fuzz::random_complex(rng);
    auto j = io::to_json(c);
    EXPECT_EQ(io::complex_from_json(j), c);
    EXPECT_EQ(io::to_json(io::complex_from_json(j)).dump(), j.dump());
    EXPECT_THROW(io::complex_from_json(io::json::parse(R"({"vertices":["a"],"edges":[{"id":"g","ends":["a","a"],"beta":"1"}]})")),
                 ParseError);
    EXPECT_THROW(io::complex_from_json(io::json::parse(R"({"vertices":["a","b"],"edges":[{"ends":["a"],"beta":"1"}]})")),
                 ParseError);
}

TEST(ComplexDot, LabelsEdgesWithBeta) {
    auto dot = io::to_dot(bigon(Rational(3, 2), 2));
    EXPECT_NE(dot.find("label=\"3/2\""), std::string::npos);
    EXPECT_NE(dot.find("\"v0\" -- \"v1\""), std::string::npos);
}

TEST(RealizeModel, Structure) {
    auto c = fuzz::cycle({2, 3, 5});
    auto r = realize_model(c);
    EXPECT_EQ(r.model.patches.size(), 3u);
    EXPECT_EQ(r.model.dim, 5u);
    EXPECT_LE(r.model.dim, 2 * c.vertex_count() + 1);
    EXPECT_EQ(r.patch_edges, (std::vector<std::string>{"g0", "g1", "g2"}));
    // Each patch end sits on its vertex arc.
    for (std::size_t k = 0; k < c.edge_count(); ++k) {
        const auto& e = c.edges()[k];
        for (int end : {0, 1}) {
            const auto& arc = r.vertex_arcs.at(c.vertices()[end ? e.b : e.a]);
            auto p = r.model.patches[k].point(0.01, end);
            auto q = arc.evaluate(0.01);
            for (std::size_t i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(p[i], q[i]);
        }
    }
    // Vertex arcs are pairwise at tord B = max beta.
    EXPECT_EQ(arc_tord(r.vertex_arcs.at("v0"), r.vertex_arcs.at("v1")), Exponent(5));
}

TEST(RealizeModel, ConeCaseHasDistinctTangents) {
    auto r = realize_model(fuzz::cycle({1, 1, 1}));
    auto a = tangent_vector(r.vertex_arcs.at("v0")).unit;
    auto b = tangent_vector(r.vertex_arcs.at("v1")).unit;
    EXPECT_NE(a, b);
}
