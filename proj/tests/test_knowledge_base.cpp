#include <doctest.h>

#include <random>
#include <sstream>

#include "mlink/knowledge_base.hpp"
#include "test_support.hpp"

using namespace mlink;

namespace {

GoldClustering gold_of(std::initializer_list<std::pair<std::string, std::set<std::string>>> cs) {
  GoldClustering g;
  for (const auto& [cid, members] : cs) g.clusters[cid] = members;
  return g;
}

Mention mk(const std::string& id, const std::string& surface) {
  Mention m;
  m.id = id;
  m.surface = surface;
  m.entity_type = "Application";
  return m;
}

}  // namespace

TEST_CASE("build_centroids: single member, forced mean, antipodal failure") {
  std::map<std::string, EmbeddingVector> emb;
  emb["m1"] = EmbeddingVector{{0.6, 0.8}};
  auto single = build_centroids(gold_of({{"c1", {"m1"}}}), emb);
  REQUIRE(single.size() == 1);
  CHECK(single[0].vector.values[0] == doctest::Approx(0.6));
  CHECK(single[0].vector.values[1] == doctest::Approx(0.8));

  emb["m1"] = EmbeddingVector{{1, 0}};
  emb["m2"] = EmbeddingVector{{0, 1}};
  auto pair = build_centroids(gold_of({{"c1", {"m1", "m2"}}}), emb);
  CHECK(pair[0].vector.values[0] == doctest::Approx(0.70710678).epsilon(1e-7));
  CHECK(pair[0].vector.values[1] == doctest::Approx(0.70710678).epsilon(1e-7));

  emb["m2"] = EmbeddingVector{{-1, 0}};
  CHECK_THROWS_WITH_AS(build_centroids(gold_of({{"c1", {"m1", "m2"}}}), emb),
                       doctest::Contains("c1"), ValidationError);
}

TEST_CASE("build_centroids names a missing embedding") {
  std::map<std::string, EmbeddingVector> emb;
  emb["m1"] = EmbeddingVector{{1, 0}};
  CHECK_THROWS_WITH_AS(build_centroids(gold_of({{"c1", {"m1", "m2"}}}), emb),
                       doctest::Contains("m2"), ValidationError);
}

TEST_CASE("build_centroids emits one centroid per gold cluster (733)") {
  std::mt19937_64 rng(41);
  GoldClustering gold;
  std::map<std::string, EmbeddingVector> emb;
  for (int c = 0; c < 733; ++c) {
    std::string cid = "c" + std::to_string(c);
    for (int k = 0; k < 2; ++k) {
      std::string mid = "m" + std::to_string(c * 2 + k);
      gold.clusters[cid].insert(mid);
      emb[mid] = fixtures::random_unit_vector(rng, 16);
    }
  }
  auto centroids = build_centroids(gold, emb);
  CHECK(centroids.size() == 733);
  for (const auto& c : centroids) {
    CHECK(std::abs(c.vector.norm() - 1.0) <= 1e-6);
  }
}

TEST_CASE("string dictionary: insertion, collision policy, empty keys skipped") {
  AbbreviationMap abbrev;

  auto dict1 = build_string_dictionary({mk("m1", "SPSS")}, gold_of({{"c7", {"m1"}}}), abbrev);
  CHECK(dict1.lookup(normalize("SPSS")) == "c7");

  // "spss28" three times in c7, once in c9 -> c7 wins
  std::vector<Mention> train = {mk("a1", "SPSS 28"), mk("a2", "spss28"), mk("a3", "SPSS-28"),
                                mk("b1", "Spss 28")};
  auto dict2 = build_string_dictionary(
      train, gold_of({{"c7", {"a1", "a2", "a3"}}, {"c9", {"b1"}}}), abbrev);
  CHECK(dict2.lookup(normalize("spss 28")) == "c7");

  // frequency tie: lexicographically smallest cluster id
  auto dict3 = build_string_dictionary({mk("a1", "spss28"), mk("b1", "spss28")},
                                       gold_of({{"c9", {"a1"}}, {"c7", {"b1"}}}), abbrev);
  CHECK(dict3.lookup(normalize("spss28")) == "c7");

  auto dict4 = build_string_dictionary({mk("m1", "—")}, gold_of({{"c1", {"m1"}}}), abbrev);
  CHECK(dict4.entries.empty());
  CHECK_FALSE(dict4.lookup(CanonicalName{}).has_value());
}

TEST_CASE("string dictionary requires gold coverage") {
  AbbreviationMap abbrev;
  CHECK_THROWS_WITH_AS(
      build_string_dictionary({mk("m1", "A"), mk("m2", "B")}, gold_of({{"c1", {"m1"}}}), abbrev),
      doctest::Contains("m2"), ValidationError);
}

TEST_CASE("nearest centroid: forced dot products and identity") {
  FlatIndex index;
  index.centroids = {{"A", EmbeddingVector{{1, 0}}}, {"B", EmbeddingVector{{0, 1}}}};
  auto [cid, sim] = nearest_centroid(index, EmbeddingVector{{0.6, 0.8}});
  CHECK(cid == "B");
  CHECK(sim == doctest::Approx(0.8));

  auto [cid2, sim2] = nearest_centroid(index, EmbeddingVector{{1, 0}});
  CHECK(cid2 == "A");
  CHECK(sim2 == doctest::Approx(1.0).epsilon(1e-6));

  FlatIndex empty;
  CHECK_THROWS_AS(nearest_centroid(empty, EmbeddingVector{{1, 0}}), ValidationError);
}

TEST_CASE("nearest centroid ties break toward the smallest index") {
  FlatIndex index;
  index.centroids = {{"first", EmbeddingVector{{1, 0}}}, {"second", EmbeddingVector{{1, 0}}}};
  CHECK(nearest_centroid(index, EmbeddingVector{{1, 0}}).first == "first");
}

TEST_CASE("retrieval exactness: 256 random centroids, 64 queries vs brute scan") {
  std::mt19937_64 rng(43);
  FlatIndex index;
  for (int i = 0; i < 256; ++i) {
    index.centroids.push_back(
        {"c" + std::to_string(i), fixtures::random_unit_vector(rng, 24)});
  }
  std::vector<EmbeddingVector> plain;
  for (const auto& c : index.centroids) plain.push_back(c.vector);
  for (int q = 0; q < 64; ++q) {
    auto query = fixtures::random_unit_vector(rng, 24);
    CHECK(index.nearest(query).first == oracle::brute_nearest(plain, query));
  }
}

TEST_CASE("KB snapshot round-trips") {
  std::mt19937_64 rng(47);
  FlatIndex index;
  for (int i = 0; i < 12; ++i) {
    index.centroids.push_back({"cluster_" + std::to_string(i), fixtures::random_unit_vector(rng, 8)});
  }
  StringDictionary dict;
  dict.entries = {{"spss", "cluster_1"}, {"matlab", "cluster_2"}, {"r", "cluster_3"}};

  std::ostringstream out;
  save_kb(index, dict, out);
  std::istringstream in(out.str());
  auto [index2, dict2] = load_kb(in);

  REQUIRE(index2.centroids.size() == index.centroids.size());
  for (std::size_t i = 0; i < index.centroids.size(); ++i) {
    CHECK(index2.centroids[i].cluster_id == index.centroids[i].cluster_id);
    for (std::size_t d = 0; d < 8; ++d) {
      CHECK(std::abs(index2.centroids[i].vector.values[d] - index.centroids[i].vector.values[d]) <=
            1e-9);
    }
  }
  CHECK(dict2.entries == dict.entries);

  FlatIndex bad;
  bad.centroids = {{"has space", EmbeddingVector{{1.0}}}};
  std::ostringstream out2;
  CHECK_THROWS_AS(save_kb(bad, dict, out2), ValidationError);
}
