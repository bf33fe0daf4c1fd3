#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "artexplain/metrics.hpp"
#include "oracle.hpp"

using namespace artexplain;
using Catch::Approx;

namespace {

EntityInventory inv_of(std::vector<std::string> surfaces) {
    return EntityInventory::from_normalized(std::move(surfaces));
}

ScoredPair pair_of(const std::vector<std::vector<std::string>>& gen,
                   const std::vector<std::vector<std::string>>& ref,
                   std::vector<std::string> surfaces) {
    return make_scored_pair_from_tokens(gen, ref, inv_of(std::move(surfaces)));
}

std::vector<std::string> default_surfaces() {
    return {"louvre", "leonardo", "leonardo da vinci", "paris", "mona",
            "da vinci", "french revolution", "napoleon"};
}

std::vector<oracle::Tokens> default_phrases() {
    std::vector<oracle::Tokens> out;
    for (const auto& s : default_surfaces()) out.push_back(oracle::split_name(s));
    return out;
}

}  // namespace

TEST_CASE("length_penalty formula") {
    CHECK(length_penalty(5, 10) == 1.0);
    CHECK(length_penalty(10, 10) == 1.0);
    CHECK(length_penalty(20, 10) == Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(length_penalty(30, 10) == Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(length_penalty(1, 0), std::invalid_argument);
}

TEST_CASE("entity_coverage exact and partial") {
    SECTION("full coverage") {
        auto p = pair_of({{"the", "louvre", "and", "paris"}}, {{"louvre", "in", "paris"}},
                         {"louvre", "paris"});
        CHECK(entity_coverage(p, CoverageMode::Exact) == 1.0);
        CHECK(entity_coverage(p, CoverageMode::Partial) == 1.0);
    }
    SECTION("no overlap") {
        auto p = pair_of({{"x", "y"}}, {{"louvre"}}, {"louvre"});
        CHECK(entity_coverage(p, CoverageMode::Exact) == 0.0);
        CHECK(entity_coverage(p, CoverageMode::Partial) == 0.0);
    }
    SECTION("partial LCS ratio") {
        auto p = pair_of({{"only", "leonardo", "here"}}, {{"by", "leonardo", "da", "vinci"}},
                         {"leonardo da vinci"});
        CHECK(entity_coverage(p, CoverageMode::Exact) == 0.0);
        CHECK(entity_coverage(p, CoverageMode::Partial) == Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SECTION("empty reference entity set scores 0") {
        auto p = pair_of({{"louvre"}}, {{"nothing", "here"}}, {"louvre"});
        CHECK(entity_coverage(p, CoverageMode::Exact) == 0.0);
    }
}

TEST_CASE("entity_f1 clipped counts") {
    SECTION("identity") {
        auto p = pair_of({{"the", "louvre", "opened"}}, {{"the", "louvre", "opened"}}, {"louvre"});
        CHECK(entity_f1(p) == 1.0);
    }
    SECTION("hand value 0.4") {
        // detected(G): louvre x3; detected(R): louvre x1, paris x1
        auto p = pair_of({{"louvre", "louvre", "louvre"}}, {{"louvre", "and", "paris"}},
                         {"louvre", "paris"});
        CHECK(entity_f1(p) == Approx(0.4).epsilon(1e-12));
    }
    SECTION("empty generation side") {
        auto p = pair_of({{"nothing"}}, {{"louvre"}}, {"louvre"});
        CHECK(entity_f1(p) == 0.0);
    }
}

TEST_CASE("cooccurrence_pairs windows") {
    auto inv = inv_of({"alpha", "beta", "gamma"});
    SECTION("single entity has no pair") {
        SentenceSeq s = make_scored_pair_from_tokens({{"alpha"}}, {}, inv).gen_sentences;
        for (int n : {0, 1, 2, kInfiniteWindow})
            CHECK(cooccurrence_pairs(s, inv, n).empty());
    }
    SECTION("distance-4 entities need n=2") {
        // windows are centered on every sentence, so entities up to 2n
        // sentences apart share the window around their midpoint
        auto p = pair_of({{"alpha", "x"}, {"y"}, {"z"}, {"y"}, {"beta", "z"}}, {},
                         {"alpha", "beta", "gamma"});
        CHECK(cooccurrence_pairs(p.gen_sentences, p.inventory, 0).empty());
        CHECK(cooccurrence_pairs(p.gen_sentences, p.inventory, 1).empty());
        auto got = cooccurrence_pairs(p.gen_sentences, p.inventory, 2);
        REQUIRE(got.size() == 1);
        CHECK(got.count({"alpha", "beta"}) == 1);
    }
    SECTION("distance-2 entities pair up already at n=1") {
        auto p = pair_of({{"alpha", "x"}, {"y"}, {"beta", "z"}}, {}, {"alpha", "beta", "gamma"});
        CHECK(cooccurrence_pairs(p.gen_sentences, p.inventory, 0).empty());
        CHECK(cooccurrence_pairs(p.gen_sentences, p.inventory, 1).size() == 1);
    }
    SECTION("infinite window gives the complete graph") {
        auto p = pair_of({{"alpha"}, {"beta"}, {"gamma"}}, {}, {"alpha", "beta", "gamma"});
        auto got = cooccurrence_pairs(p.gen_sentences, p.inventory, kInfiniteWindow);
        CHECK(got.size() == 3);
    }
    SECTION("window monotonicity of pair sets") {
        oracle::DocGen gen(23);
        auto inv2 = inv_of(default_surfaces());
        for (int iter = 0; iter < 50; ++iter) {
            auto doc = gen.doc();
            auto p = make_scored_pair_from_tokens(doc, doc, inv2);
            auto p0 = cooccurrence_pairs(p.gen_sentences, p.inventory, 0);
            auto p1 = cooccurrence_pairs(p.gen_sentences, p.inventory, 1);
            auto p2 = cooccurrence_pairs(p.gen_sentences, p.inventory, 2);
            auto pi = cooccurrence_pairs(p.gen_sentences, p.inventory, kInfiniteWindow);
            auto subset = [](const auto& a, const auto& b) {
                for (const auto& x : a)
                    if (!b.count(x)) return false;
                return true;
            };
            CHECK(subset(p0, p1));
            CHECK(subset(p1, p2));
            CHECK(subset(p2, pi));
        }
    }
}

TEST_CASE("entity_cooccurrence composition with the length penalty") {
    SECTION("identity") {
        auto p = pair_of({{"alpha", "beta"}}, {{"alpha", "beta"}}, {"alpha", "beta"});
        for (int n : {0, 1, 2, kInfiniteWindow}) CHECK(entity_cooccurrence(p, n) == 1.0);
    }
    SECTION("half coverage") {
        // Co(R) = {{a,b},{a,c}}, Co(G) = {{a,b}}, equal lengths
        auto p = pair_of({{"alpha", "beta", "x", "y", "z", "w"}},
                         {{"alpha", "beta", "x"}, {"alpha", "gamma", "y"}},
                         {"alpha", "beta", "gamma"});
        REQUIRE(p.gen_tokens.size() == p.ref_tokens.size());
        CHECK(entity_cooccurrence(p, 0) == Approx(0.5).epsilon(1e-12));
    }
    SECTION("half coverage with doubled length") {
        auto p = pair_of({{"alpha", "beta", "x", "y", "z", "w", "q", "r", "s", "t", "u", "v"}},
                         {{"alpha", "beta", "x"}, {"alpha", "gamma", "y"}},
                         {"alpha", "beta", "gamma"});
        REQUIRE(p.gen_tokens.size() == 2 * p.ref_tokens.size());
        CHECK(entity_cooccurrence(p, 0) == Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    }
    SECTION("no reference pair scores 0") {
        auto p = pair_of({{"alpha", "beta"}}, {{"alpha"}}, {"alpha", "beta"});
        CHECK(entity_cooccurrence(p, kInfiniteWindow) == 0.0);
    }
}

TEST_CASE("bleu") {
    auto toks = [](std::vector<std::string> v) {
        TokenSeq t;
        for (auto& s : v) {
            t.tokens.push_back(s);
            t.spans.push_back({t.spans.size(), t.spans.size() + 1});
        }
        return t;
    };
    SECTION("identity is 100") {
        auto g = toks({"the", "cat", "sat", "down"});
        CHECK(bleu(g, g) == Approx(100.0).epsilon(1e-12));
    }
    SECTION("disjoint is 0") {
        CHECK(bleu(toks({"a", "b"}), toks({"c", "d"})) == 0.0);
    }
    SECTION("documented smoothing rule") {
        // p1=p2=p3=1; the 4-gram precision smooths to (0+1)/(0+1)=1;
        // brevity penalty exp(1 - 4/3) remains.
        auto g = toks({"the", "cat", "sat"});
        auto r = toks({"the", "cat", "sat", "down"});
        CHECK(bleu(g, r) == Approx(100.0 * std::exp(1.0 - 4.0 / 3.0)).epsilon(1e-12));
    }
    SECTION("empty generation is 0") {
        CHECK(bleu(TokenSeq{}, toks({"a"})) == 0.0);
    }
}

TEST_CASE("rouge") {
    auto toks = [](std::vector<std::string> v) {
        TokenSeq t;
        for (auto& s : v) {
            t.tokens.push_back(s);
            t.spans.push_back({t.spans.size(), t.spans.size() + 1});
        }
        return t;
    };
    SECTION("identity is 100 for all variants") {
        auto g = toks({"the", "cat", "sat", "on", "mat"});
        CHECK(rouge(g, g, RougeVariant::R1) == Approx(100.0));
        CHECK(rouge(g, g, RougeVariant::R2) == Approx(100.0));
        CHECK(rouge(g, g, RougeVariant::RL) == Approx(100.0));
    }
    SECTION("disjoint is 0") {
        auto g = toks({"a", "b"});
        auto r = toks({"c", "d"});
        for (auto v : {RougeVariant::R1, RougeVariant::R2, RougeVariant::RL})
            CHECK(rouge(g, r, v) == 0.0);
    }
    SECTION("RL hand value 60") {
        auto g = toks({"the", "dog", "sat", "big", "mat"});
        auto r = toks({"the", "cat", "sat", "on", "mat"});
        CHECK(rouge(g, r, RougeVariant::RL) == Approx(60.0).epsilon(1e-12));
    }
}

TEST_CASE("score_pair bundles all columns") {
    SECTION("identical texts") {
        auto p = pair_of({{"the", "louvre", "and", "paris", "met"}},
                         {{"the", "louvre", "and", "paris", "met"}}, {"louvre", "paris"});
        auto v = score_pair(p);
        CHECK(v.ec_exact == Approx(100.0));
        CHECK(v.ec_partial == Approx(100.0));
        CHECK(v.entity_f1 == Approx(100.0));
        for (int n : {0, 1, 2, kInfiniteWindow}) CHECK(v.ecooc.at(n) == Approx(100.0));
        CHECK(v.bleu == Approx(100.0));
        CHECK(v.gen_len == 5);
    }
    SECTION("empty generation") {
        auto p = pair_of({}, {{"the", "louvre", "and", "paris"}}, {"louvre", "paris"});
        auto v = score_pair(p);
        CHECK(v.gen_len == 0);
        CHECK(v.ec_exact == 0.0);
        CHECK(v.ec_partial == 0.0);
        CHECK(v.entity_f1 == 0.0);
        for (int n : {0, 1, 2, kInfiniteWindow}) CHECK(v.ecooc.at(n) == 0.0);
    }
    SECTION("ec_exact <= ec_partial always") {
        oracle::DocGen gen(99);
        auto surfaces = default_surfaces();
        for (int iter = 0; iter < 300; ++iter) {
            auto p = make_scored_pair_from_tokens(gen.doc(), gen.doc(), inv_of(surfaces));
            auto v = score_pair(p);
            CHECK(v.ec_exact <= v.ec_partial + 1e-12);
        }
    }
}

TEST_CASE("metrics agree with the brute-force oracle") {
    oracle::DocGen gen(4242);
    auto surfaces = default_surfaces();
    auto phrases = default_phrases();
    for (int iter = 0; iter < 100; ++iter) {
        auto gdoc = gen.doc();
        auto rdoc = gen.doc();
        auto p = make_scored_pair_from_tokens(gdoc, rdoc, inv_of(surfaces));
        CHECK(entity_coverage(p, CoverageMode::Exact) ==
              Approx(oracle::ec_exact(gdoc, rdoc, phrases)).margin(1e-12));
        CHECK(entity_coverage(p, CoverageMode::Partial) ==
              Approx(oracle::ec_partial(gdoc, rdoc, phrases)).margin(1e-12));
        CHECK(entity_f1(p) == Approx(oracle::f1(gdoc, rdoc, phrases)).margin(1e-12));
        for (int n : {0, 1, 2, kInfiniteWindow}) {
            int oracle_n = n == kInfiniteWindow ? -1 : n;
            CHECK(entity_cooccurrence(p, n) ==
                  Approx(oracle::ecooc(gdoc, rdoc, phrases, oracle_n)).margin(1e-12));
        }
    }
}

TEST_CASE("metrics ignore trailing whitespace in input text") {
    auto inv = inv_of({"louvre", "paris"});
    auto a = make_scored_pair("x", "The Louvre is in Paris. It is big.",
                              "The Louvre. Paris is nice.", inv);
    auto b = make_scored_pair("x", "The Louvre is in Paris. It is big.   \n",
                              "The Louvre. Paris is nice.  ", inv);
    auto va = score_pair(a);
    auto vb = score_pair(b);
    CHECK(va.bleu == vb.bleu);
    CHECK(va.ec_exact == vb.ec_exact);
    CHECK(va.ec_partial == vb.ec_partial);
    CHECK(va.entity_f1 == vb.entity_f1);
    CHECK(va.ecooc == vb.ecooc);
    CHECK(va.gen_len == vb.gen_len);
}
