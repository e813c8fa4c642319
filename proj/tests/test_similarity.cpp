#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "structeval/similarity.hpp"
#include "support/bridge.hpp"

using namespace structeval;
using testsupport::Node;
using testsupport::Rng;

namespace {

const char* kSwapGold = R"({"name": "Giraffe", "eatType": "coffee shop", "near": "The Rice Boat"})";
const char* kSwapPred = R"({"name": "The Rice Boat", "eatType": "coffee shop", "near": "Giraffe"})";

InstanceScore exact_score(const char* gold, const char* pred) {
    return content_similarity(parse_strict(gold), parse_strict(pred), ExactBackend{});
}

/// Random prediction derived from `gold`: values kept, changed, dropped, or keys added.
Node perturb(const Node& gold, Rng& rng) {
    Node out = gold;
    if (out.kind == Node::Kind::Object) {
        std::vector<std::pair<std::string, Node>> members;
        for (const auto& [k, v] : out.members) {
            if (rng.chance(15)) continue;
            members.emplace_back(k, rng.chance(70) ? perturb(v, rng) : testsupport::random_node(rng, {1, 2}));
        }
        if (rng.chance(20)) members.emplace_back("zz_extra", Node::string("extra"));
        out.members = std::move(members);
    } else if (out.kind == Node::Kind::Array) {
        if (!out.items.empty() && rng.chance(20)) out.items.erase(out.items.begin());
        for (auto& i : out.items) i = perturb(i, rng);
    } else if (rng.chance(30)) {
        out = Node::string(testsupport::random_text(rng));
    }
    return out;
}

}  // namespace

TEST(Backends, Exact) {
    ExactBackend b;
    EXPECT_EQ(b.score("pub", "pub"), 1.0);
    EXPECT_EQ(b.score("  pub\n", "pub"), 1.0);
    EXPECT_EQ(b.score("pub", "Pub"), 0.0);
    EXPECT_EQ(b.name(), "exact");
}

TEST(Backends, TokenOverlap) {
    TokenOverlapBackend b;
    EXPECT_DOUBLE_EQ(b.score("coffee shop", "coffee house"), 0.5);
    EXPECT_DOUBLE_EQ(b.score("Coffee  Shop", "shop coffee"), 1.0);
    EXPECT_DOUBLE_EQ(b.score("", "   "), 1.0);
    EXPECT_DOUBLE_EQ(b.score("", "x"), 0.0);
    EXPECT_DOUBLE_EQ(b.score("a a b", "a"), 0.5);
    EXPECT_EQ(b.name(), "token");
}

TEST(Backends, SymmetricAndReflexive) {
    Rng rng(3);
    ExactBackend exact;
    TokenOverlapBackend token;
    for (int i = 0; i < 2000; ++i) {
        const std::string a = testsupport::random_text(rng);
        const std::string b = testsupport::random_text(rng);
        for (const SimilarityBackend* be : {static_cast<const SimilarityBackend*>(&exact), static_cast<const SimilarityBackend*>(&token)}) {
            ASSERT_EQ(be->score(a, b), be->score(b, a));
            ASSERT_EQ(be->score(a, a), 1.0);
            const double s = be->score(a, b);
            ASSERT_GE(s, 0.0);
            ASSERT_LE(s, 1.0);
        }
    }
}

TEST(PairLeaves, IdenticalTrees) {
    const auto leaves = flatten(parse_strict(kSwapGold));
    const auto p = pair_leaves(leaves, leaves);
    EXPECT_EQ(p.matched.size(), 3u);
    EXPECT_TRUE(p.gold_only.empty());
    EXPECT_TRUE(p.pred_only.empty());
}

TEST(PairLeaves, GoldOnlyLeftover) {
    const auto p = pair_leaves(flatten(parse_strict(R"({"a":1,"b":2})")), flatten(parse_strict(R"({"a":1})")));
    ASSERT_EQ(p.matched.size(), 1u);
    EXPECT_EQ(p.matched[0].first.path.to_string(), "a");
    ASSERT_EQ(p.gold_only.size(), 1u);
    EXPECT_EQ(p.gold_only[0].path.to_string(), "b");
    EXPECT_TRUE(p.pred_only.empty());
}

TEST(PairLeaves, SwapCaseMatchesAllPaths) {
    const auto p = pair_leaves(flatten(parse_strict(kSwapGold)), flatten(parse_strict(kSwapPred)));
    EXPECT_EQ(p.matched.size(), 3u);
    EXPECT_TRUE(p.gold_only.empty());
    EXPECT_TRUE(p.pred_only.empty());
}

TEST(PairLeaves, AncestorKeysMustMatch) {
    const auto p = pair_leaves(flatten(parse_strict(R"({"a":{"x":1}})")), flatten(parse_strict(R"({"b":{"x":1}})")));
    EXPECT_TRUE(p.matched.empty());
    EXPECT_EQ(p.gold_only.size(), 1u);
    EXPECT_EQ(p.pred_only.size(), 1u);
}

TEST(SoftPrecision, HalfMatched) {
    const auto p = pair_leaves(flatten(parse_strict(R"({"a":"x"})")), flatten(parse_strict(R"({"a":"x","b":"y"})")));
    EXPECT_DOUBLE_EQ(soft_precision(p.matched, p.pred_only, ExactBackend{}), 0.5);
}

TEST(SoftPrecision, EmptyPrediction) {
    const auto p = pair_leaves(flatten(parse_strict(R"({"a":"x"})")), {});
    EXPECT_EQ(soft_precision(p.matched, p.pred_only, ExactBackend{}), 0.0);
}

TEST(SoftRecall, HalfSupplied) {
    const auto p = pair_leaves(flatten(parse_strict(R"({"a":"x","b":"y"})")), flatten(parse_strict(R"({"a":"x"})")));
    EXPECT_DOUBLE_EQ(soft_recall(p.matched, p.gold_only, ExactBackend{}), 0.5);
}

TEST(SoftRecall, SupersetPrediction) {
    const auto p = pair_leaves(flatten(parse_strict(R"({"a":"x"})")), flatten(parse_strict(R"({"a":"x","b":"y"})")));
    EXPECT_DOUBLE_EQ(soft_recall(p.matched, p.gold_only, ExactBackend{}), 1.0);
}

TEST(ContentSimilarity, SwapPenalty) {
    const auto s = exact_score(kSwapGold, kSwapPred);
    EXPECT_NEAR(s.sim_p, 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(s.sim_r, 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(s.sim_c, 1.0 / 3.0, 1e-9);
    EXPECT_EQ(exact_score(kSwapGold, kSwapGold).sim_c, 1.0);
}

TEST(ContentSimilarity, MissingKey) {
    const auto s = exact_score(R"({"name": "Blue Spice", "area": "riverside"})", R"({"name": "Blue Spice"})");
    EXPECT_NEAR(s.sim_p, 1.0, 1e-9);
    EXPECT_NEAR(s.sim_r, 0.5, 1e-9);
    EXPECT_NEAR(s.sim_c, 2.0 / 3.0, 1e-9);
    EXPECT_EQ(s.matched_pairs, 1u);
    EXPECT_EQ(s.gold_leaves, 2u);
    EXPECT_EQ(s.pred_leaves, 1u);
}

TEST(ContentSimilarity, NumbersCompareByValue) {
    EXPECT_EQ(exact_score(R"({"y": 1887})", R"({"y": 1887.0})").sim_c, 1.0);
    EXPECT_EQ(exact_score(R"({"y": 1887})", R"({"y": "1887"})").sim_c, 1.0);
    EXPECT_EQ(exact_score(R"({"y": true})", R"({"y": "true"})").sim_c, 1.0);
}

TEST(ContentSimilarity, BothEmpty) {
    const auto s = exact_score("{}", R"({"a": [], "b": {}})");
    EXPECT_EQ(s.sim_p, 1.0);
    EXPECT_EQ(s.sim_r, 1.0);
    EXPECT_EQ(s.sim_c, 1.0);
}

TEST(ContentSimilarity, OneSideEmpty) {
    const auto s = exact_score(R"({"a": "x"})", "{}");
    EXPECT_EQ(s.sim_p, 0.0);
    EXPECT_EQ(s.sim_r, 0.0);
    EXPECT_EQ(s.sim_c, 0.0);
}

TEST(ContentSimilarity, ArraysAlignByIndex) {
    const auto s = exact_score(R"({"t": ["a", "b", "c"]})", R"({"t": ["b", "c"]})");
    EXPECT_EQ(s.sim_c, 0.0);
    const auto t = exact_score(R"({"t": ["a", "b", "c"]})", R"({"t": ["a", "b"]})");
    EXPECT_NEAR(t.sim_c, 0.8, 1e-12);
}

TEST(HarmonicMean, EdgeCases) {
    EXPECT_EQ(harmonic_mean(0.0, 0.0), 0.0);
    EXPECT_EQ(harmonic_mean(0.3, 0.3), 0.3);
    EXPECT_EQ(harmonic_mean(1.0, 0.0), 0.0);
    EXPECT_NEAR(harmonic_mean(1.0, 0.5), 2.0 / 3.0, 1e-15);
}

TEST(SimilarityProperties, HarmonicBound) {
    Rng rng(8080);
    TokenOverlapBackend token;
    ExactBackend exact;
    for (int i = 0; i < 3000; ++i) {
        const Node gold = testsupport::random_document(rng);
        const Node pred = rng.chance(80) ? perturb(gold, rng) : testsupport::random_document(rng);
        const SimilarityBackend& be = rng.chance(50) ? static_cast<const SimilarityBackend&>(token) : exact;
        const auto s = content_similarity(testsupport::to_value(gold), testsupport::to_value(pred), be);
        // A harmonic mean lies between min and max and never exceeds the arithmetic mean.
        ASSERT_GE(s.sim_c, std::min(s.sim_p, s.sim_r) - 1e-12);
        ASSERT_LE(s.sim_c, std::max(s.sim_p, s.sim_r) + 1e-12);
        ASSERT_LE(s.sim_c, (s.sim_p + s.sim_r) / 2.0 + 1e-12);
        if (s.sim_p + s.sim_r == 0.0) {
            ASSERT_EQ(s.sim_c, 0.0);
        }
        if (s.sim_p == s.sim_r) {
            ASSERT_EQ(s.sim_c, s.sim_p);
        }
        ASSERT_GE(s.sim_c, 0.0);
        ASSERT_LE(s.sim_c, 1.0);
    }
}

TEST(SimilarityProperties, UniformWeighting) {
    // Stretching one gold value tenfold moves sim_r by at most 1/gold_leaves.
    Rng rng(11);
    TokenOverlapBackend token;
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const Node gold = testsupport::random_document(rng);
        const Node pred = perturb(gold, rng);
        const auto base = content_similarity(testsupport::to_value(gold), testsupport::to_value(pred), token);
        for (const auto& [k, v] : gold.members) {
            if (v.kind != Node::Kind::String || v.text.empty()) continue;
            std::string longer;
            for (int r = 0; r < 10; ++r) longer += v.text + " ";
            JsonValue stretched = testsupport::to_value(gold);
            stretched.set(k, JsonValue(longer));
            const auto s = content_similarity(stretched, testsupport::to_value(pred), token);
            ASSERT_LE(std::abs(s.sim_r - base.sim_r), 1.0 / static_cast<double>(base.gold_leaves) + 1e-12);
            ++checked;
            break;
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(SimilarityProperties, MissingKeyStrictlyLowersRecall) {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        Node gold = testsupport::random_document(rng);
        const JsonValue pred = testsupport::to_value(gold);
        const auto base = content_similarity(testsupport::to_value(gold), pred, ExactBackend{});
        ASSERT_EQ(base.sim_c, 1.0);
        if (base.gold_leaves == 0) continue;
        gold.members.emplace_back("zz_absent_from_prediction", Node::string("v"));
        const auto s = content_similarity(testsupport::to_value(gold), pred, ExactBackend{});
        ASSERT_LT(s.sim_r, base.sim_r);
    }
}

TEST(SimilarityProperties, Deterministic) {
    Rng rng(13);
    TokenOverlapBackend token;
    for (int i = 0; i < 500; ++i) {
        const Node gold = testsupport::random_document(rng);
        const Node pred = perturb(gold, rng);
        const auto a = content_similarity(testsupport::to_value(gold), testsupport::to_value(pred), token);
        const auto b = content_similarity(testsupport::to_value(gold), testsupport::to_value(pred), token);
        ASSERT_EQ(std::memcmp(&a.sim_c, &b.sim_c, sizeof(double)), 0);
        ASSERT_EQ(a.sim_p, b.sim_p);
        ASSERT_EQ(a.sim_r, b.sim_r);
    }
}
