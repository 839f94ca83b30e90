#include <doctest.h>

#include <cmath>
#include <numeric>

#include "chunkalign/features.h"
#include "chunkalign/lexicon.h"

#include "fixtures.h"

using namespace chunkalign;
using testutil::phrase;
using testutil::TempDir;
using testutil::write_file;

namespace {

// Each word its own single-sense tree: self-pairs score 1, cross pairs are
// absent.
TaxonomyGraph self_only_taxonomy(const TempDir& dir) {
    return TaxonomyGraph::load(write_file(dir, "self.tsv",
                                          "s_red\tred\tROOT\n"
                                          "s_car\tcar\tROOT\n"));
}

}  // namespace

TEST_CASE("word overlap features on the fixture pairs") {
    Resources empty;
    Phrase red_car = phrase("red car");

    OverlapFeatures self = overlap_features(red_car, red_car, empty);
    CHECK(self.common_word_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(self.synonym_overlap == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(self.antonym_overlap == 0.0);
    CHECK(self.hypernym_link == 0.0);
    CHECK(self.path_similarity_sum == 0.0);  // no taxonomy loaded

    TempDir dir;
    Resources with_tax;
    with_tax.taxonomy = self_only_taxonomy(dir);
    CHECK(overlap_features(red_car, red_car, with_tax).path_similarity_sum ==
          doctest::Approx(0.5).epsilon(1e-9));  // two self-pairs over len 2+2

    Resources antonyms = testutil::toy_resources();
    OverlapFeatures opposed = overlap_features(phrase("hot"), phrase("cold"), antonyms);
    CHECK(opposed.antonym_overlap == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(opposed.common_word_ratio == 0.0);

    OverlapFeatures disjoint = overlap_features(phrase("dog"), phrase("tree"), empty);
    CHECK(disjoint.common_word_ratio == 0.0);
    CHECK(disjoint.synonym_overlap == 0.0);
    CHECK(disjoint.antonym_overlap == 0.0);

    // Degenerate: two empty phrases stay all-zero rather than dividing by 0.
    OverlapFeatures none = overlap_features(phrase(""), phrase(""), empty);
    CHECK(none.common_word_ratio == 0.0);
    CHECK(none.path_similarity_sum == 0.0);
}

TEST_CASE("synonym expansion joins the overlap") {
    Resources res = testutil::toy_resources();  // car <-> auto
    OverlapFeatures f = overlap_features(phrase("car"), phrase("auto"), res);
    CHECK(f.common_word_ratio == 0.0);
    CHECK(f.synonym_overlap == doctest::Approx(2.0).epsilon(1e-9));  // both sides expand
}

TEST_CASE("hypernym link fires through the hierarchy in both directions") {
    TempDir dir;
    Resources res;
    res.hypernyms = load_lexicon(write_file(dir, "up.tsv", "dog\tanimal\n"), Relation::hypernym);
    cross_close_hierarchy(res.hypernyms, res.hyponyms);

    CHECK(overlap_features(phrase("animal"), phrase("dog"), res).hypernym_link == 1.0);
    CHECK(overlap_features(phrase("dog"), phrase("animal"), res).hypernym_link == 1.0);
    CHECK(overlap_features(phrase("dog"), phrase("tree"), res).hypernym_link == 0.0);
}

TEST_CASE("surface features: numbers, negation, signed length difference") {
    SurfaceFeatures f = surface_features(phrase("3 dogs"), phrase("three dogs"));
    CHECK(f.has_number == 1.0);
    CHECK(surface_features(phrase("three dogs"), phrase("three dogs")).has_number == 0.0);

    CHECK(surface_features(phrase("did not go"), phrase("went")).negation_mismatch == 1.0);
    CHECK(surface_features(phrase("went"), phrase("did not go")).negation_mismatch == 1.0);
    CHECK(surface_features(phrase("did not go"), phrase("never went")).negation_mismatch == 0.0);
    CHECK(surface_features(phrase("don't go"), phrase("go")).negation_mismatch == 1.0);

    CHECK(surface_features(phrase("a b c"), phrase("a b")).length_difference == 1.0);
    CHECK(surface_features(phrase("a b"), phrase("a b c")).length_difference == -1.0);
}

TEST_CASE("edit score fixture values") {
    CHECK(edit_score(phrase("red car"), phrase("red car")) == 1.0);
    CHECK(edit_score(phrase("cat"), phrase("car")) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(edit_score(phrase("abc"), phrase("xyz")) == 0.0);
    CHECK(edit_score(phrase("a b"), phrase("")) == 0.0);
    CHECK(edit_score(phrase(""), phrase("a b")) == 0.0);
}

TEST_CASE("edit score is asymmetric when one phrase contains the other") {
    Phrase small = phrase("cat");
    Phrase large = phrase("cat dog");
    CHECK(edit_score(small, large) == 1.0);
    CHECK(edit_score(large, small) == 0.5);  // dog finds no match at all
}

TEST_CASE("optimized edit score equals the double loop on random phrases") {
    testutil::TestRng rng(7);
    for (int it = 0; it < 300; ++it) {
        Phrase p1 = testutil::random_phrase(rng);
        Phrase p2 = testutil::random_phrase(rng);
        CHECK(edit_score(p1, p2) == testutil::edit_score_brute(p1, p2));
    }
}

TEST_CASE("paraphrase, embedding and bigram features") {
    TempDir dir;
    Resources res;
    res.ppdb.add("car", "auto", 0.9);
    res.embeddings = EmbeddingTable::load(write_file(dir, "emb.txt",
                                                     "3 3\n"
                                                     "dog 1 0 0\n"
                                                     "cat 0 1 0\n"
                                                     "red 0 0 1\n"));

    CHECK(resource_features(phrase("car"), phrase("auto"), res).paraphrase_sum ==
          doctest::Approx(0.9).epsilon(1e-9));
    // Identity pairs default to 1.0 each.
    CHECK(resource_features(phrase("a b"), phrase("a b"), res).paraphrase_sum ==
          doctest::Approx(2.0).epsilon(1e-9));

    ResourceFeatures one_hot = resource_features(phrase("dog"), phrase("cat"), res);
    CHECK(one_hot.embedding_cosine == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(resource_features(phrase("dog red"), phrase("dog red"), res).embedding_cosine ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Out-of-vocabulary sums are zero vectors -> cosine guard returns 0.
    CHECK(resource_features(phrase("zzz"), phrase("dog"), res).embedding_cosine == 0.0);

    CHECK(resource_features(phrase("a b"), phrase("a b c"), res).bigram_cosine ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(resource_features(phrase("a b c"), phrase("a b c"), res).bigram_cosine ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(resource_features(phrase("a"), phrase("a b"), res).bigram_cosine == 0.0);
}

TEST_CASE("declared symmetries hold on random phrase pairs") {
    TempDir dir;
    Resources res = testutil::toy_resources();
    res.taxonomy = TaxonomyGraph::load(write_file(dir, "tax.tsv",
                                                  "s_animal\tanimal\tROOT\n"
                                                  "s_dog\tdog\ts_animal\n"
                                                  "s_cat\tcat\ts_animal\n"));
    res.embeddings = EmbeddingTable::load(write_file(dir, "emb.txt",
                                                     "3 3\n"
                                                     "cat 1 0 0\n"
                                                     "car 0 1 0\n"
                                                     "dog 0 0 1\n"));

    testutil::TestRng rng(11);
    for (int it = 0; it < 200; ++it) {
        Phrase p1 = testutil::random_phrase(rng);
        Phrase p2 = testutil::random_phrase(rng);
        OverlapFeatures a = overlap_features(p1, p2, res);
        OverlapFeatures b = overlap_features(p2, p1, res);
        CHECK(a.common_word_ratio == b.common_word_ratio);
        CHECK(a.antonym_overlap == b.antonym_overlap);
        CHECK(a.path_similarity_sum == b.path_similarity_sum);

        ResourceFeatures ra = resource_features(p1, p2, res);
        ResourceFeatures rb = resource_features(p2, p1, res);
        CHECK(ra.paraphrase_sum == rb.paraphrase_sum);
        CHECK(ra.embedding_cosine == rb.embedding_cosine);
        CHECK(ra.bigram_cosine == rb.bigram_cosine);

        CHECK(surface_features(p1, p2).length_difference ==
              -surface_features(p2, p1).length_difference);
    }
}

TEST_CASE("group similarity is the max of its six ingredients") {
    Resources empty;
    testutil::TestRng rng(13);
    for (int it = 0; it < 50; ++it) {
        Phrase p = testutil::random_phrase(rng);
        if (p.length == 0) continue;
        CHECK(sim_score(p, p, empty) == 1.0);
    }

    Resources antonyms = testutil::toy_resources();
    CHECK(sim_score(phrase("hot"), phrase("cold"), antonyms) == 2.0);
    CHECK(sim_score(phrase("qq"), phrase("zz"), empty) == 0.0);
    CHECK(sim_score(phrase("car"), phrase("auto"), antonyms) == 2.0);  // via expansion

    // The profile-based overload is the same function.
    Phrase p1 = phrase("the red car");
    Phrase p2 = phrase("a fast auto");
    CHECK(sim_score(make_sim_profile(p1, antonyms), make_sim_profile(p2, antonyms)) ==
          sim_score(p1, p2, antonyms));
}

TEST_CASE("classifier vector wires every named slot to its feature") {
    TempDir dir;
    Resources res = testutil::toy_resources();
    res.taxonomy = self_only_taxonomy(dir);

    testutil::TestRng rng(17);
    for (int it = 0; it < 50; ++it) {
        Phrase p1 = testutil::random_phrase(rng);
        Phrase p2 = testutil::random_phrase(rng);
        FeatureVector v = classifier_vector(p1, p2, res, 16);
        OverlapFeatures ov = overlap_features(p1, p2, res);
        SurfaceFeatures sf = surface_features(p1, p2);
        ResourceFeatures rf = resource_features(p1, p2, res);
        CHECK(v.common_word_ratio == ov.common_word_ratio);
        CHECK(v.synonym_overlap == ov.synonym_overlap);
        CHECK(v.antonym_overlap == ov.antonym_overlap);
        CHECK(v.hypernym_link == ov.hypernym_link);
        CHECK(v.path_similarity_sum == ov.path_similarity_sum);
        CHECK(v.has_number == sf.has_number);
        CHECK(v.negation_mismatch == sf.negation_mismatch);
        CHECK(v.length_difference == sf.length_difference);
        CHECK(v.edit_similarity == edit_score(p1, p2));
        CHECK(v.paraphrase_sum == rf.paraphrase_sum);
        CHECK(v.embedding_cosine == rf.embedding_cosine);
        CHECK(v.bigram_cosine == rf.bigram_cosine);
    }
}

TEST_CASE("as_array keeps the slot order the classifiers were trained on") {
    FeatureVector v;
    v.common_word_ratio = 1;
    v.synonym_overlap = 2;
    v.antonym_overlap = 3;
    v.hypernym_link = 4;
    v.path_similarity_sum = 5;
    v.has_number = 6;
    v.negation_mismatch = 7;
    v.edit_similarity = 8;
    v.paraphrase_sum = 9;
    v.embedding_cosine = 10;
    v.bigram_cosine = 11;
    v.length_difference = 12;
    std::array<double, 12> a = v.as_array();
    for (int i = 0; i < 12; ++i) CHECK(a[static_cast<std::size_t>(i)] == i + 1);
}

TEST_CASE("ngram block splits source and target into halves") {
    Resources empty;
    Phrase p = phrase("red car");

    FeatureVector v = classifier_vector(p, p, empty, 64);
    REQUIRE(v.ngram_block.size() == 64);
    for (int i = 0; i < 32; ++i)
        CHECK(v.ngram_block[static_cast<std::size_t>(i)] ==
              v.ngram_block[static_cast<std::size_t>(32 + i)]);
    // 2 unigrams + 1 bigram per side.
    CHECK(std::accumulate(v.ngram_block.begin(), v.ngram_block.begin() + 32, 0.0) == 3.0);
    CHECK(std::accumulate(v.ngram_block.begin() + 32, v.ngram_block.end(), 0.0) == 3.0);

    // Odd widths give the upper half the extra slot.
    FeatureVector odd = classifier_vector(p, phrase("red"), empty, 7);
    REQUIRE(odd.ngram_block.size() == 7);
    CHECK(std::accumulate(odd.ngram_block.begin(), odd.ngram_block.begin() + 3, 0.0) == 3.0);
    CHECK(std::accumulate(odd.ngram_block.begin() + 3, odd.ngram_block.end(), 0.0) == 1.0);

    // An empty side leaves its half untouched.
    FeatureVector degenerate = classifier_vector(p, phrase(""), empty, 16);
    CHECK(degenerate.length_difference == 2.0);
    CHECK(degenerate.edit_similarity == 0.0);
    CHECK(std::accumulate(degenerate.ngram_block.begin() + 8, degenerate.ngram_block.end(),
                          0.0) == 0.0);
}
