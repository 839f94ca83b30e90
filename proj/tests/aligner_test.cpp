#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chunkalign/aligner.h"
#include "chunkalign/wa_format.h"

#include "fixtures.h"

using namespace chunkalign;
using testutil::TestRng;

namespace {

std::vector<testutil::PairKey> chosen_keys(const AlignmentSolution& sol) {
    std::vector<testutil::PairKey> keys;
    for (const CandidatePair& c : sol.chosen) keys.push_back(pair_key(c));
    return keys;
}

CandidatePair cand(std::vector<int> src, std::vector<int> tgt, double weight) {
    CandidatePair c;
    c.s1 = {Side::source, std::move(src)};
    c.s2 = {Side::target, std::move(tgt)};
    c.weight = weight;
    return c;
}

void check_feasible(const AlignmentSolution& sol) {
    std::uint64_t src_used = 0, tgt_used = 0;
    for (const CandidatePair& c : sol.chosen) {
        for (int id : c.s1.ids) {
            CHECK((src_used >> (id - 1) & 1) == 0);
            src_used |= std::uint64_t{1} << (id - 1);
        }
        for (int id : c.s2.ids) {
            CHECK((tgt_used >> (id - 1) & 1) == 0);
            tgt_used |= std::uint64_t{1} << (id - 1);
        }
    }
}

}  // namespace

TEST_CASE("make_chunked_sentence validates the partition") {
    NormalizationMap none;
    auto toks = [&none](std::initializer_list<const char*> words) {
        std::vector<Token> out;
        for (const char* w : words) out.push_back(make_token(w, none));
        return out;
    };

    ChunkedSentence ok = make_chunked_sentence(toks({"a", "b", "c"}), {{0, 2}, {2, 3}});
    CHECK(ok.chunk_count() == 2);
    CHECK(ok.chunk(1) == ChunkSpan{0, 2});
    CHECK(ok.chunk(2) == ChunkSpan{2, 3});

    CHECK_THROWS_WITH_AS(make_chunked_sentence(toks({"a", "b"}), {{0, 1}}),
                         "chunks do not cover all tokens", std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_chunked_sentence(toks({"a", "b"}), {{0, 1}, {1, 1}}),
                         doctest::Contains("chunk 2 is empty"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_chunked_sentence(toks({"a", "b"}), {{0, 1}, {1, 3}}),
                         doctest::Contains("extends past the last token"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_chunked_sentence(toks({"a", "b", "c"}), {{0, 1}, {2, 3}}),
                         doctest::Contains("does not start where the previous one ended"),
                         std::invalid_argument);
}

TEST_CASE("group_phrase concatenates chunks by id") {
    ChunkedSentence s = parse_chunks("[ the red ] [ car ]");
    CHECK(group_phrase(s, {1}).words == std::vector<std::string>{"the", "red"});
    CHECK(group_phrase(s, {2}).words == std::vector<std::string>{"car"});
    CHECK(group_phrase(s, {1, 2}).words == std::vector<std::string>{"the", "red", "car"});
    CHECK(group_phrase(s, {1, 2}).length == 3);
    CHECK_THROWS_WITH_AS(group_phrase(s, {3}), doctest::Contains("chunk id 3 out of range"),
                         std::invalid_argument);
}

TEST_CASE("alpha weight grows with group cardinality") {
    CHECK(alpha_weight(1, 1, 1.5) == 1.0);
    CHECK(alpha_weight(1, 1, 0.7) == 1.0);
    CHECK(alpha_weight(2, 2, 1.5) == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(alpha_weight(2, 1, 1.0) == 1.0);
    CHECK(alpha_weight(2, 1, 1.5) == 1.5);
}

TEST_CASE("build_candidates enumerates singleton and pair groups") {
    Resources res;
    AlignConfig keep_all;
    keep_all.prune_threshold = -1.0;  // keep zero-similarity pairs too

    auto one_token_chunks = [](int n, char prefix) {
        std::string text;
        for (int i = 0; i < n; ++i)
            text += "[ " + std::string(1, prefix) + std::to_string(i) + " ] ";
        return parse_chunks(text);
    };

    ChunkedSentence s2 = one_token_chunks(2, 'a');
    ChunkedSentence t2 = one_token_chunks(2, 'b');
    CHECK(build_candidates(s2, t2, res, keep_all).size() == 9);

    ChunkedSentence s10 = one_token_chunks(10, 'a');
    ChunkedSentence t10 = one_token_chunks(10, 'b');
    CHECK(build_candidates(s10, t10, res, keep_all).size() == 3025);

    ChunkedSentence s1 = one_token_chunks(1, 'a');
    ChunkedSentence t1 = one_token_chunks(1, 'b');
    CHECK(build_candidates(s1, t1, res, keep_all).size() == 1);

    AlignConfig singles = keep_all;
    singles.max_group_size = 1;
    CHECK(build_candidates(s2, t2, res, singles).size() == 4);

    AlignConfig bad;
    bad.max_group_size = 4;
    CHECK_THROWS_AS(build_candidates(s2, t2, res, bad), std::invalid_argument);
}

TEST_CASE("build_candidates stores weight = alpha * sim and prunes at the threshold") {
    Resources res;
    AlignConfig cfg;
    cfg.gamma = 1.3;
    cfg.prune_threshold = 0.0;

    ChunkedSentence src = parse_chunks("[ red car ] [ dog ]");
    ChunkedSentence tgt = parse_chunks("[ red car ] [ dog ]");
    std::vector<CandidatePair> cands = build_candidates(src, tgt, res, cfg);
    CHECK_FALSE(cands.empty());
    for (const CandidatePair& c : cands) {
        CHECK(c.weight == c.alpha * c.sim);
        CHECK(c.weight > 0.0);
        CHECK(c.alpha == alpha_weight(static_cast<int>(c.s1.ids.size()),
                                      static_cast<int>(c.s2.ids.size()), cfg.gamma));
        Phrase p1 = group_phrase(src, c.s1.ids);
        Phrase p2 = group_phrase(tgt, c.s2.ids);
        CHECK(c.sim == sim_score(p1, p2, res));
    }

    // Completely unrelated sides have sim 0 everywhere: all pruned.
    ChunkedSentence other = parse_chunks("[ qq ] [ zz ]");
    CHECK(build_candidates(src, other, res, cfg).empty());
}

TEST_CASE("solve_ilp trivial cases") {
    AlignmentSolution empty = solve_ilp({}, 2, 3);
    CHECK(empty.objective == 0.0);
    CHECK(empty.chosen.empty());
    CHECK(empty.unaligned_source == std::vector<int>{1, 2});
    CHECK(empty.unaligned_target == std::vector<int>{1, 2, 3});

    AlignmentSolution one = solve_ilp({cand({1}, {1}, 0.9)}, 1, 1);
    CHECK(one.objective == 0.9);
    REQUIRE(one.chosen.size() == 1);
    CHECK(one.chosen[0].s1.ids == std::vector<int>{1});
    CHECK(one.unaligned_source.empty());
    CHECK(one.unaligned_target.empty());
}

TEST_CASE("solve_ilp picks the best of conflicting candidates") {
    // Two candidates fight over source chunk 1; a third is disjoint.
    std::vector<CandidatePair> cands = {
        cand({1}, {1}, 0.9),
        cand({1}, {2}, 0.8),
        cand({2}, {2}, 0.8),
    };
    AlignmentSolution sol = solve_ilp(cands, 2, 2);
    CHECK(sol.objective == doctest::Approx(1.7).epsilon(1e-12));
    REQUIRE(sol.chosen.size() == 2);
    CHECK(pair_key(sol.chosen[0]) == testutil::PairKey{{1}, {1}});
    CHECK(pair_key(sol.chosen[1]) == testutil::PairKey{{2}, {2}});
    check_feasible(sol);
}

TEST_CASE("solve_ilp validates candidate ids") {
    CHECK_THROWS_WITH_AS(solve_ilp({cand({3}, {1}, 1.0)}, 2, 2),
                         doctest::Contains("source chunk id 3 out of range"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(solve_ilp({cand({1}, {5}, 1.0)}, 2, 2),
                         doctest::Contains("target chunk id 5 out of range"),
                         std::invalid_argument);
    CHECK_THROWS_AS(solve_ilp({cand({}, {1}, 1.0)}, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(solve_ilp({}, 65, 1), std::invalid_argument);
}

TEST_CASE("equal-objective ties go to the lexicographically smallest key list") {
    // Both candidates want source chunk 1 at the same weight.
    AlignmentSolution sol =
        solve_ilp({cand({1}, {2}, 0.5), cand({1}, {1}, 0.5)}, 1, 2);
    CHECK(sol.objective == 0.5);
    REQUIRE(sol.chosen.size() == 1);
    CHECK(pair_key(sol.chosen[0]) == testutil::PairKey{{1}, {1}});

    // Fewer merged chunks beats a merged pair of equal weight.
    AlignmentSolution flat =
        solve_ilp({cand({1, 2}, {1}, 0.5), cand({1}, {1}, 0.5)}, 2, 1);
    REQUIRE(flat.chosen.size() == 1);
    CHECK(pair_key(flat.chosen[0]) == testutil::PairKey{{1}, {1}});
}

TEST_CASE("zero-weight candidates still join the solution when that shrinks the key list") {
    // {A(w=0), B(w=0.5)} sorts before {B} alone, so the optimum keeps A.
    AlignmentSolution sol =
        solve_ilp({cand({1}, {1}, 0.0), cand({2}, {2}, 0.5)}, 2, 2);
    CHECK(sol.objective == 0.5);
    REQUIRE(sol.chosen.size() == 2);
    CHECK(pair_key(sol.chosen[0]) == testutil::PairKey{{1}, {1}});

    // A negative weight, in contrast, is never worth carrying.
    AlignmentSolution neg =
        solve_ilp({cand({1}, {1}, -0.1), cand({2}, {2}, 0.5)}, 2, 2);
    CHECK(neg.objective == 0.5);
    REQUIRE(neg.chosen.size() == 1);
    CHECK(pair_key(neg.chosen[0]) == testutil::PairKey{{2}, {2}});
    CHECK(neg.unaligned_source == std::vector<int>{1});
}

TEST_CASE("solve_ilp matches exhaustive enumeration on random instances") {
    TestRng rng(101);
    for (int it = 0; it < 150; ++it) {
        const int m = 1 + rng.below(4);
        const int n = 1 + rng.below(4);
        std::vector<CandidatePair> cands =
            testutil::random_candidates(rng, m, n, -1.0, 1.0);
        AlignmentSolution sol = solve_ilp(cands, m, n);
        testutil::PackingResult best = testutil::brute_force_packing(cands);
        CHECK(sol.objective == best.objective);
        CHECK(chosen_keys(sol) == best.keys);
        check_feasible(sol);

        // Recompute the objective from the chosen pairs in key order: the
        // stored value must be that exact sum.
        double recomputed = 0;
        for (const CandidatePair& c : sol.chosen) recomputed += c.weight;
        CHECK(sol.objective == recomputed);
    }
}

TEST_CASE("solution order does not depend on candidate input order") {
    TestRng rng(202);
    for (int it = 0; it < 40; ++it) {
        std::vector<CandidatePair> cands = testutil::random_candidates(rng, 3, 3, -0.5, 1.0);
        AlignmentSolution a = solve_ilp(cands, 3, 3);
        testutil::shuffle(cands, rng);
        AlignmentSolution b = solve_ilp(cands, 3, 3);
        CHECK(a.objective == b.objective);
        CHECK(chosen_keys(a) == chosen_keys(b));
        CHECK(a.unaligned_source == b.unaligned_source);
        CHECK(a.unaligned_target == b.unaligned_target);
    }
}

TEST_CASE("adding a candidate never lowers the optimum") {
    TestRng rng(303);
    for (int it = 0; it < 60; ++it) {
        std::vector<CandidatePair> cands = testutil::random_candidates(rng, 3, 3, -1.0, 1.0);
        testutil::shuffle(cands, rng);
        std::vector<CandidatePair> subset(cands.begin(),
                                          cands.begin() + cands.size() / 2);
        double before = solve_ilp(subset, 3, 3).objective;
        subset.push_back(cands[cands.size() / 2]);
        double after = solve_ilp(subset, 3, 3).objective;
        CHECK(after >= before);
    }
}

TEST_CASE("singleton groups with unit alpha reduce to the assignment problem") {
    TestRng rng(404);
    for (int it = 0; it < 30; ++it) {
        const int n = 6;
        std::vector<std::vector<double>> w(n, std::vector<double>(n));
        std::vector<CandidatePair> cands;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rng.uniform();
                cands.push_back(cand({i + 1}, {j + 1},
                                     w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
            }
        AlignmentSolution sol = solve_ilp(cands, n, n);
        CHECK(sol.objective == testutil::hungarian_max(w));
    }
}

TEST_CASE("align maps identical sentences onto the diagonal") {
    Resources res;
    ChunkedSentence src = parse_chunks("[ the old dog ] [ sleeps ] [ outside ]");
    ChunkedSentence tgt = parse_chunks("[ the old dog ] [ sleeps ] [ outside ]");
    AlignmentSolution sol = align(src, tgt, res, AlignConfig{});
    REQUIRE(sol.chosen.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(sol.chosen[static_cast<std::size_t>(i)].s1.ids == std::vector<int>{i + 1});
        CHECK(sol.chosen[static_cast<std::size_t>(i)].s2.ids == std::vector<int>{i + 1});
        CHECK(sol.chosen[static_cast<std::size_t>(i)].sim == 1.0);
    }
    CHECK(sol.objective == 3.0);
    CHECK(sol.unaligned_source.empty());
    CHECK(sol.unaligned_target.empty());
}

TEST_CASE("gamma above the crossover lets a 2-2 merge beat stacked singletons") {
    Resources res;
    ChunkedSentence src = parse_chunks("[ the red ] [ car ]");
    ChunkedSentence tgt = parse_chunks("[ the ] [ red car ]");

    // Best singleton packing reaches 1/1.5 + 1 = 5/3; the merged pair scores
    // gamma^2. gamma = 1.4 clears the bar, gamma = 1.0 does not.
    AlignConfig merged_cfg;
    merged_cfg.gamma = 1.4;
    AlignmentSolution merged = align(src, tgt, res, merged_cfg);
    REQUIRE(merged.chosen.size() == 1);
    CHECK(merged.chosen[0].s1.ids == std::vector<int>{1, 2});
    CHECK(merged.chosen[0].s2.ids == std::vector<int>{1, 2});
    CHECK(merged.chosen[0].sim == 1.0);

    AlignConfig flat_cfg;
    flat_cfg.gamma = 1.0;
    AlignmentSolution flat = align(src, tgt, res, flat_cfg);
    REQUIRE(flat.chosen.size() == 2);
    CHECK(pair_key(flat.chosen[0]) == testutil::PairKey{{1}, {1}});
    CHECK(pair_key(flat.chosen[1]) == testutil::PairKey{{2}, {2}});
    CHECK(flat.objective == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("align leaves chunks without positive-similarity candidates unaligned") {
    Resources res;
    ChunkedSentence src = parse_chunks("[ red car ] [ qq ]");
    ChunkedSentence tgt = parse_chunks("[ red car ]");
    AlignmentSolution sol = align(src, tgt, res, AlignConfig{});
    REQUIRE(sol.chosen.size() == 1);
    CHECK(sol.chosen[0].s1.ids == std::vector<int>{1});
    CHECK(sol.unaligned_source == std::vector<int>{2});
    CHECK(sol.unaligned_target.empty());
}
