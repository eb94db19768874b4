#include <doctest.h>

#include <cmath>
#include <random>

#include "mlink/assigner.hpp"
#include "test_support.hpp"

using namespace mlink;

namespace {

struct Harness {
  FlatIndex index;
  StringDictionary dict;
  AbbreviationMap abbrev;
  PipelineConfig cfg;

  Harness() {
    // centroid A on the x axis, its antipode far away; queries built as
    // (s, sqrt(1-s^2)) hit A with similarity exactly s
    index.centroids = {{"A", EmbeddingVector{{1, 0}}}, {"Far", EmbeddingVector{{-1, 0}}}};
    dict.entries["knownkey"] = "D";
    cfg.embed_dim = 2;
  }

  Mention mention(bool key_present) const {
    Mention m;
    m.id = "q";
    m.surface = key_present ? "KnownKey" : "UnseenSurface";
    m.entity_type = "Application";
    return m;
  }

  static EmbeddingVector query(double s) {
    return EmbeddingVector{{s, std::sqrt(1.0 - s * s)}};
  }
};

}  // namespace

TEST_CASE("cascade: high similarity wins and uses the nearest centroid") {
  Harness h;
  h.cfg.mode = Mode::subtask1;
  auto a = assign(h.mention(false), Harness::query(0.95), h.index, h.dict, h.cfg, h.abbrev);
  CHECK(a.matched);
  CHECK(a.cluster_id == "A");
  CHECK(a.method == MatchMethod::high_sim);
  CHECK(a.similarity == doctest::Approx(0.95));
}

TEST_CASE("cascade: medium band with dictionary hit assigns the dictionary cluster") {
  Harness h;
  h.cfg.mode = Mode::subtask1;
  auto a = assign(h.mention(true), Harness::query(0.60), h.index, h.dict, h.cfg, h.abbrev);
  CHECK(a.matched);
  CHECK(a.cluster_id == "D");  // dictionary cluster, not the nearest centroid
  CHECK(a.method == MatchMethod::medium_sim_string);
  CHECK(a.similarity == doctest::Approx(0.60));
}

TEST_CASE("cascade: medium band without dictionary hit is unmatched") {
  Harness h;
  h.cfg.mode = Mode::subtask1;
  auto a = assign(h.mention(false), Harness::query(0.60), h.index, h.dict, h.cfg, h.abbrev);
  CHECK_FALSE(a.matched);
  CHECK(a.similarity == doctest::Approx(0.60));
}

TEST_CASE("cascade: subtask3 exact string match precedes retrieval") {
  Harness h;
  h.cfg.mode = Mode::subtask3;
  auto a = assign(h.mention(true), Harness::query(0.10), h.index, h.dict, h.cfg, h.abbrev);
  CHECK(a.matched);
  CHECK(a.cluster_id == "D");
  CHECK(a.method == MatchMethod::exact_string);
  CHECK_FALSE(a.similarity.has_value());  // steps 2-3 never consulted
}

TEST_CASE("cascade boundary suite: 20 hand-enumerated cases") {
  Harness h;
  const double sims[] = {0.49, 0.50, 0.69, 0.70, 0.71};
  struct Expect {
    bool matched;
    const char* cluster;  // nullptr for unmatched
    std::optional<MatchMethod> method;
  };

  auto run = [&](Mode mode, double s, bool key) {
    h.cfg.mode = mode;
    return assign(h.mention(key), Harness::query(s), h.index, h.dict, h.cfg, h.abbrev);
  };

  // subtask1, key present
  {
    Expect expect[] = {{false, nullptr, {}},
                       {true, "D", MatchMethod::medium_sim_string},
                       {true, "D", MatchMethod::medium_sim_string},
                       {true, "A", MatchMethod::high_sim},
                       {true, "A", MatchMethod::high_sim}};
    for (int i = 0; i < 5; ++i) {
      auto a = run(Mode::subtask1, sims[i], true);
      CHECK(a.matched == expect[i].matched);
      if (expect[i].cluster) CHECK(a.cluster_id == expect[i].cluster);
      CHECK(a.method == expect[i].method);
    }
  }
  // subtask1, key absent
  {
    Expect expect[] = {{false, nullptr, {}},
                       {false, nullptr, {}},
                       {false, nullptr, {}},
                       {true, "A", MatchMethod::high_sim},
                       {true, "A", MatchMethod::high_sim}};
    for (int i = 0; i < 5; ++i) {
      auto a = run(Mode::subtask1, sims[i], false);
      CHECK(a.matched == expect[i].matched);
      if (expect[i].cluster) CHECK(a.cluster_id == expect[i].cluster);
      CHECK(a.method == expect[i].method);
      if (!a.matched) CHECK(a.similarity == doctest::Approx(sims[i]));
    }
  }
  // subtask3, key present: exact string regardless of similarity
  for (double s : sims) {
    auto a = run(Mode::subtask3, s, true);
    CHECK(a.matched);
    CHECK(a.cluster_id == "D");
    CHECK(a.method == MatchMethod::exact_string);
  }
  // subtask3, key absent: no medium band, only the high threshold
  {
    Expect expect[] = {{false, nullptr, {}},
                       {false, nullptr, {}},
                       {false, nullptr, {}},
                       {true, "A", MatchMethod::high_sim},
                       {true, "A", MatchMethod::high_sim}};
    for (int i = 0; i < 5; ++i) {
      auto a = run(Mode::subtask3, sims[i], false);
      CHECK(a.matched == expect[i].matched);
      if (expect[i].cluster) CHECK(a.cluster_id == expect[i].cluster);
      CHECK(a.method == expect[i].method);
    }
  }
}

TEST_CASE("degenerate embedding routes to unmatched without a similarity") {
  Harness h;
  h.cfg.mode = Mode::subtask1;
  auto a = assign(h.mention(false), EmbeddingVector::degenerate_of(2), h.index, h.dict, h.cfg,
                  h.abbrev);
  CHECK_FALSE(a.matched);
  CHECK_FALSE(a.similarity.has_value());

  // subtask3 exact string still fires for degenerate embeddings
  h.cfg.mode = Mode::subtask3;
  auto b = assign(h.mention(true), EmbeddingVector::degenerate_of(2), h.index, h.dict, h.cfg,
                  h.abbrev);
  CHECK(b.matched);
  CHECK(b.method == MatchMethod::exact_string);
}

TEST_CASE("assign_all: identity matches, empty set, hand-enumerated mixed fixture") {
  Harness h;
  h.cfg.mode = Mode::subtask1;

  // every embedding equal to a distinct centroid -> zero unmatched
  std::vector<Mention> mentions;
  std::vector<EmbeddingVector> embs;
  for (int i = 0; i < 2; ++i) {
    Mention m;
    m.id = "m" + std::to_string(i);
    m.surface = "S" + std::to_string(i);
    m.entity_type = "T";
    mentions.push_back(m);
    embs.push_back(h.index.centroids[i].vector);
  }
  auto outcome = assign_all(mentions, embs, h.index, h.dict, h.cfg, h.abbrev);
  CHECK(outcome.unmatched.empty());
  for (const auto& a : outcome.assignments) {
    CHECK(a.matched);
    CHECK(*a.similarity == doctest::Approx(1.0));
  }

  auto empty = assign_all({}, {}, h.index, h.dict, h.cfg, h.abbrev);
  CHECK(empty.assignments.empty());
  CHECK(empty.unmatched.empty());

  // mixed fixture of 20 mentions: similarities cycle {0.95, 0.60, 0.60, 0.30}
  // with the dictionary key present on every 2nd entry (0-based index % 4):
  //   i%4==0 -> high_sim; i%4==1 -> key present, medium -> matched;
  //   i%4==2 -> key absent, medium -> unmatched; i%4==3 -> low -> unmatched
  std::vector<Mention> mixed;
  std::vector<EmbeddingVector> mixed_embs;
  std::vector<std::size_t> expected_unmatched;
  for (std::size_t i = 0; i < 20; ++i) {
    bool key = (i % 4 == 1);
    Mention m = h.mention(key);
    m.id = "q" + std::to_string(i);
    mixed.push_back(m);
    double s = (i % 4 == 0) ? 0.95 : (i % 4 == 3 ? 0.30 : 0.60);
    mixed_embs.push_back(Harness::query(s));
    if (i % 4 == 2 || i % 4 == 3) expected_unmatched.push_back(i);
  }
  auto mixed_out = assign_all(mixed, mixed_embs, h.index, h.dict, h.cfg, h.abbrev);
  CHECK(mixed_out.unmatched == expected_unmatched);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(mixed_out.assignments[i].mention_id == mixed[i].id);
  }
}

TEST_CASE("property: raising the high threshold never converts unmatched to high_sim") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    FlatIndex index;
    for (int c = 0; c < 8; ++c) {
      index.centroids.push_back({"c" + std::to_string(c), fixtures::random_unit_vector(rng, 8)});
    }
    StringDictionary dict;
    AbbreviationMap abbrev;
    PipelineConfig low_cfg, high_cfg;
    low_cfg.embed_dim = high_cfg.embed_dim = 8;
    low_cfg.high_threshold = 0.55;
    high_cfg.high_threshold = 0.85;
    low_cfg.medium_threshold = high_cfg.medium_threshold = 0.5;

    Mention m;
    m.id = "q";
    m.surface = "Query";
    m.entity_type = "T";
    for (int q = 0; q < 10; ++q) {
      auto e = fixtures::random_unit_vector(rng, 8);
      auto lo = assign(m, e, index, dict, low_cfg, abbrev);
      auto hi = assign(m, e, index, dict, high_cfg, abbrev);
      if (!lo.matched) {
        CHECK_FALSE(hi.matched);  // hi threshold can only lose matches
      }
      if (hi.matched && hi.method == MatchMethod::high_sim) {
        CHECK(lo.matched);
        CHECK(*hi.similarity >= 0.85);
      }
      if (lo.matched && lo.method == MatchMethod::high_sim) {
        CHECK(*lo.similarity >= 0.55);
      }
    }
  }
}

TEST_CASE("property: subtask3 dictionary mentions are never unmatched") {
  std::mt19937_64 rng(59);
  FlatIndex index;
  index.centroids = {{"c0", fixtures::random_unit_vector(rng, 8)}};
  StringDictionary dict;
  dict.entries[normalize("KnownKey").value] = "c0";
  AbbreviationMap abbrev;
  PipelineConfig cfg;
  cfg.mode = Mode::subtask3;
  cfg.embed_dim = 8;
  Mention m;
  m.id = "q";
  m.surface = "KnownKey";
  m.entity_type = "T";
  for (int q = 0; q < 50; ++q) {
    auto a = assign(m, fixtures::random_unit_vector(rng, 8), index, dict, cfg, abbrev);
    CHECK(a.matched);
  }
}

TEST_CASE("default config: every high_sim match has similarity >= 0.7") {
  std::mt19937_64 rng(61);
  FlatIndex index;
  for (int c = 0; c < 16; ++c) {
    index.centroids.push_back({"c" + std::to_string(c), fixtures::random_unit_vector(rng, 4)});
  }
  StringDictionary dict;
  AbbreviationMap abbrev;
  PipelineConfig cfg;  // defaults: high 0.7, medium 0.5
  cfg.embed_dim = 4;
  Mention m;
  m.id = "q";
  m.surface = "Query";
  m.entity_type = "T";
  for (int q = 0; q < 300; ++q) {
    auto a = assign(m, fixtures::random_unit_vector(rng, 4), index, dict, cfg, abbrev);
    if (a.matched && a.method == MatchMethod::high_sim) {
      CHECK(*a.similarity >= 0.7);
    }
  }
}
