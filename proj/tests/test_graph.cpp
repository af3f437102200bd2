#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hetrec/graph.hpp"
#include "hetrec/interaction.hpp"
#include "hetrec/schema.hpp"
#include "hetrec/weights.hpp"

using namespace hetrec;

namespace {

InteractionSchema edu_schema() {
  InteractionSchema s;
  s.user_tag = "user";
  s.tags = {"user", "course", "post", "comment", "resource", "university"};
  s.interactions = {
      {"follow_course", "user", "course", true},
      {"follow_user", "user", "user", false},  // one-way
      {"create_post", "user", "post", true},
      {"like_post", "user", "post", true},
      {"create_comment", "user", "comment", true},
      {"like_comment", "user", "comment", true},
      {"create_resource", "user", "resource", true},
      {"rate_resource", "user", "resource", true},
      {"join_university", "user", "university", true},
      {"comment_under_post", "comment", "post", true},
  };
  return s;
}

InteractionRecord rec(std::string user, std::string object, std::string tag,
                      std::string interaction, Timestamp ts = 0) {
  InteractionRecord r;
  r.user_id = std::move(user);
  r.object_id = std::move(object);
  r.object_tag = std::move(tag);
  r.interaction = std::move(interaction);
  r.timestamp = ts;
  return r;
}

}  // namespace

TEST(Schema, TwoWayInteractionYieldsBothDirections) {
  InteractionSchema s;
  s.tags = {"user", "course"};
  s.interactions = {{"follow_course", "user", "course", true}};
  auto reg = register_schema(s);
  ASSERT_EQ(reg.size(), 2u);
  EXPECT_TRUE(reg.find("follow_course", Direction::Out).has_value());
  EXPECT_TRUE(reg.find("follow_course", Direction::In).has_value());
}

TEST(Schema, OneWayInteractionYieldsOnlyOut) {
  InteractionSchema s;
  s.tags = {"user"};
  s.interactions = {{"follow_user", "user", "user", false}};
  auto reg = register_schema(s);
  ASSERT_EQ(reg.size(), 1u);
  EXPECT_TRUE(reg.find("follow_user", Direction::Out).has_value());
  EXPECT_FALSE(reg.find("follow_user", Direction::In).has_value());
}

TEST(Schema, EmptyDefinitionsGiveEmptyRegistry) {
  auto reg = register_schema(InteractionSchema{});
  EXPECT_EQ(reg.size(), 0u);
}

TEST(Schema, DuplicateInteractionNameRejected) {
  InteractionSchema s;
  s.tags = {"user", "course"};
  s.interactions = {{"follow", "user", "course", true}, {"follow", "user", "course", false}};
  EXPECT_THROW(register_schema(s), DataError);
}

TEST(Schema, UnknownTagReferenceRejected) {
  InteractionSchema s;
  s.tags = {"user"};
  s.interactions = {{"follow", "user", "course", true}};
  EXPECT_THROW(register_schema(s), DataError);
}

TEST(Schema, DuplicateOrEmptyTagRejected) {
  InteractionSchema dup;
  dup.tags = {"user", "user"};
  EXPECT_THROW(register_schema(dup), DataError);
  InteractionSchema empty;
  empty.tags = {""};
  EXPECT_THROW(register_schema(empty), DataError);
}

TEST(Schema, CanonicalOrderIsSortedOutBeforeIn) {
  auto reg = register_schema(edu_schema());
  // 10 interactions, one of them one-way: 19 base edge types.
  ASSERT_EQ(reg.size(), 19u);
  for (std::size_t i = 1; i < reg.size(); ++i) {
    const auto& a = reg.type(static_cast<EdgeTypeId>(i - 1));
    const auto& b = reg.type(static_cast<EdgeTypeId>(i));
    const bool ordered = a.interaction < b.interaction ||
                         (a.interaction == b.interaction && a.direction == Direction::Out &&
                          b.direction == Direction::In);
    EXPECT_TRUE(ordered) << a.label() << " before " << b.label();
  }
}

TEST(Schema, JsonRoundTrip) {
  auto s = edu_schema();
  auto s2 = InteractionSchema::from_json(s.to_json());
  EXPECT_EQ(s2.user_tag, s.user_tag);
  ASSERT_EQ(s2.interactions.size(), s.interactions.size());
  EXPECT_EQ(s2.interactions[1].name, "follow_user");
  EXPECT_FALSE(s2.interactions[1].two_way);
}

TEST(BuildGraph, EmptyRecordsGiveEmptyGraph) {
  auto reg = register_schema(edu_schema());
  auto g = build_graph(std::vector<InteractionRecord>{}, reg);
  EXPECT_EQ(g.vertex_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, TwoWayRecordMakesTwoEdges) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u1", "c1", "course", "follow_course")};
  auto g = build_graph(records, reg);
  ASSERT_EQ(g.vertex_count(), 2u);
  ASSERT_EQ(g.edge_count(), 2u);
  auto u1 = g.find_vertex("user", "u1");
  auto c1 = g.find_vertex("course", "c1");
  ASSERT_TRUE(u1 && c1);
  auto out = g.out_neighbors(*u1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].target, *c1);
  EXPECT_EQ(g.edge_type(out[0].type).label, "follow_course:out");
  auto back = g.out_neighbors(*c1);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].target, *u1);
  EXPECT_EQ(g.edge_type(back[0].type).label, "follow_course:in");
}

TEST(BuildGraph, OneWayRecordMakesOneEdge) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u1", "u2", "user", "follow_user")};
  auto g = build_graph(records, reg);
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  auto u2 = g.find_vertex("user", "u2");
  ASSERT_TRUE(u2);
  EXPECT_EQ(g.out_degree(*u2), 0u);
  EXPECT_EQ(g.in_degree(*u2), 1u);
}

TEST(BuildGraph, DistinctInteractionsOnSamePairCombine) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{
      rec("u", "p", "post", "create_post", 1),
      rec("u", "p", "post", "like_post", 2),
  };
  auto g = build_graph(records, reg);
  ASSERT_EQ(g.vertex_count(), 2u);
  // One combined edge per direction, not four edges.
  ASSERT_EQ(g.edge_count(), 2u);
  auto u = g.find_vertex("user", "u");
  ASSERT_TRUE(u);
  auto out = g.out_neighbors(*u);
  ASSERT_EQ(out.size(), 1u);
  const auto& entry = g.edge_type(out[0].type);
  EXPECT_EQ(entry.parts.size(), 2u);
  EXPECT_EQ(entry.label, "create_post:out+like_post:out");

  std::map<std::string, double> wmap{{"create_post:out", 1.11}, {"create_post:in", 1.0},
                                     {"like_post:out", 1.27},   {"like_post:in", 1.0}};
  // Restrict to a registry that only has these two interactions for the map.
  InteractionSchema s;
  s.tags = {"user", "post"};
  s.interactions = {{"create_post", "user", "post", true}, {"like_post", "user", "post", true}};
  auto reg2 = register_schema(s);
  auto g2 = build_graph(records, reg2);
  auto w = WeightVector::from_map(reg2, wmap);
  auto out2 = g2.out_neighbors(*g2.find_vertex("user", "u"));
  ASSERT_EQ(out2.size(), 1u);
  EXPECT_NEAR(resolve_weight(g2.edge_type(out2[0].type), w), 2.38, 1e-12);
}

TEST(BuildGraph, CombinedInEdgeMirrorsOutAndResolves) {
  InteractionSchema s;
  s.tags = {"user", "post"};
  s.interactions = {{"create_post", "user", "post", true}, {"like_post", "user", "post", true}};
  auto reg = register_schema(s);
  std::vector<InteractionRecord> records{rec("u", "p", "post", "create_post", 1),
                                         rec("u", "p", "post", "like_post", 2)};
  auto g = build_graph(records, reg);
  auto p = g.find_vertex("post", "p");
  ASSERT_TRUE(p);
  auto back = g.out_neighbors(*p);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(g.edge_type(back[0].type).label, "create_post:in+like_post:in");
  auto w = WeightVector::from_map(reg, {{"create_post:out", 1.0},
                                        {"create_post:in", 0.4},
                                        {"like_post:out", 1.0},
                                        {"like_post:in", 0.6}});
  EXPECT_NEAR(resolve_weight(g.edge_type(back[0].type), w), 1.0, 1e-12);
}

TEST(BuildGraph, OutInteractionLookupSeesCompositeParts) {
  InteractionSchema s;
  s.tags = {"user", "post"};
  s.interactions = {{"create_post", "user", "post", true}, {"like_post", "user", "post", true}};
  auto reg = register_schema(s);
  std::vector<InteractionRecord> records{rec("u", "p", "post", "create_post", 1),
                                         rec("u", "p", "post", "like_post", 2)};
  auto g = build_graph(records, reg);
  auto u = g.find_vertex("user", "u");
  auto p = g.find_vertex("post", "p");
  ASSERT_TRUE(u && p);
  auto out = g.out_neighbors(*u);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(g.type_has_out_interaction(out[0].type, {"like_post"}));
  EXPECT_TRUE(g.type_has_out_interaction(out[0].type, {"create_post"}));
  EXPECT_FALSE(g.type_has_out_interaction(out[0].type, {"rate_resource"}));
  // The mirrored edge carries only In parts.
  auto back = g.out_neighbors(*p);
  EXPECT_FALSE(g.type_has_out_interaction(back[0].type, {"like_post", "create_post"}));
}

TEST(BuildGraph, RandomRecordsKeepStructuralInvariants) {
  auto reg = register_schema(edu_schema());
  std::mt19937_64 rng(31);
  const char* interactions[] = {"follow_course", "follow_user", "create_post",
                                "like_post",     "like_comment", "join_university"};
  const char* tags[] = {"course", "user", "post", "post", "comment", "university"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<InteractionRecord> records;
    for (int i = 0; i < 120; ++i) {
      const std::size_t pick = rng() % 6;
      std::string user = "u" + std::to_string(rng() % 12);
      std::string object = std::string(1, 'a' + static_cast<char>(pick)) +
                           std::to_string(rng() % 9);
      if (interactions[pick] == std::string("follow_user")) {
        object = "u" + std::to_string(rng() % 12);
        if (object == user) continue;
      }
      records.push_back(rec(user, object, tags[pick], interactions[pick],
                            static_cast<Timestamp>(rng() % 10000)));
    }
    auto g = build_graph(records, reg);
    auto uniform = WeightVector::uniform(reg);
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
      EXPECT_FALSE(g.vertex(v).tag.empty());
      auto row = g.out_neighbors(v);
      for (std::size_t i = 0; i < row.size(); ++i) {
        EXPECT_NE(row[i].target, v);  // no self-loops survive
        if (i > 0) {
          EXPECT_LT(row[i - 1].target, row[i].target);  // no parallel edges
        }
        EXPECT_GT(resolve_weight(g.edge_type(row[i].type), uniform), 0.0);
      }
    }
  }
}

TEST(BuildGraph, DuplicateIdenticalInteractionsDeduplicate) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{
      rec("u", "c", "course", "follow_course", 1),
      rec("u", "c", "course", "follow_course", 99),
  };
  auto g = build_graph(records, reg);
  EXPECT_EQ(g.edge_count(), 2u);  // one out, one in
}

TEST(BuildGraph, UnregisteredInteractionRejected) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u", "c", "course", "bogus")};
  EXPECT_THROW(build_graph(records, reg), DataError);
}

TEST(BuildGraph, SelfLoopRejected) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u1", "u1", "user", "follow_user")};
  EXPECT_THROW(build_graph(records, reg), DataError);
}

TEST(BuildGraph, TagMismatchRejected) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u1", "c1", "post", "follow_course")};
  EXPECT_THROW(build_graph(records, reg), DataError);
}

TEST(BuildGraph, SameIdUnderDifferentTagsIsTwoVertices) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("x", "x", "course", "follow_course")};
  auto g = build_graph(records, reg);
  EXPECT_EQ(g.vertex_count(), 2u);
}

TEST(BuildGraph, EdgeCountLawForFreshTwoWayPairs) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records;
  for (int i = 0; i < 7; ++i)
    records.push_back(rec("u" + std::to_string(i), "c" + std::to_string(i % 3), "course",
                          "follow_course", i));
  auto g = build_graph(records, reg);
  EXPECT_EQ(g.edge_count(), 2 * records.size());
}

TEST(BuildGraph, DeterministicUnderRecordShuffle) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{
      rec("u1", "c1", "course", "follow_course", 1),
      rec("u2", "c1", "course", "follow_course", 2),
      rec("u1", "u2", "user", "follow_user", 3),
      rec("u2", "p1", "post", "create_post", 4),
      rec("u1", "p1", "post", "like_post", 5),
      rec("m1", "p1", "post", "comment_under_post", 6),
  };
  auto dump = build_graph(records, reg).canonical_dump();
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    EXPECT_EQ(build_graph(records, reg).canonical_dump(), dump);
  }
}

TEST(BuildGraph, CanonicalDumpGolden) {
  InteractionSchema s;
  s.tags = {"user", "course"};
  s.interactions = {{"follow_course", "user", "course", true}};
  auto reg = register_schema(s);
  std::vector<InteractionRecord> records{rec("u1", "c1", "course", "follow_course")};
  auto g = build_graph(records, reg);
  EXPECT_EQ(g.canonical_dump(),
            "edge course/c1 user/u1 follow_course:in\n"
            "edge user/u1 course/c1 follow_course:out\n");
}

TEST(BuildGraph, NoParallelEdgesAfterBuild) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{
      rec("u", "p", "post", "create_post", 1),
      rec("u", "p", "post", "like_post", 2),
      rec("u", "p", "post", "create_post", 3),
  };
  auto g = build_graph(records, reg);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    auto row = g.out_neighbors(v);
    for (std::size_t i = 1; i < row.size(); ++i)
      EXPECT_LT(row[i - 1].target, row[i].target);  // strictly ascending: no duplicates
  }
}

TEST(Weights, ResolveSingletonAndUniform) {
  InteractionSchema s;
  s.tags = {"user", "course"};
  s.interactions = {{"follow_course", "user", "course", true}};
  auto reg = register_schema(s);
  auto w = WeightVector::from_map(reg, {{"follow_course:out", 0.73}, {"follow_course:in", 1.88}});
  auto id = reg.find("follow_course", Direction::Out);
  ASSERT_TRUE(id);
  EdgeTypeEntry entry{{*id}, "follow_course:out"};
  EXPECT_DOUBLE_EQ(resolve_weight(entry, w), 0.73);

  auto uni = WeightVector::uniform(reg);
  EXPECT_DOUBLE_EQ(resolve_weight(entry, uni), 1.0);
}

TEST(Weights, MissingEntryAndNonPositiveRejected) {
  InteractionSchema s;
  s.tags = {"user", "course"};
  s.interactions = {{"a", "user", "course", true}, {"b", "user", "course", true}};
  auto reg = register_schema(s);
  auto w = WeightVector::from_map(reg, {{"a:out", 1.0}});
  EdgeTypeEntry missing{{*reg.find("b", Direction::Out)}, "b:out"};
  EXPECT_THROW(resolve_weight(missing, w), DataError);
  EXPECT_THROW(WeightVector::from_map(reg, {{"a:out", 0.0}}), DataError);
  EXPECT_THROW(WeightVector::from_map(reg, {{"a:out", -1.0}}), DataError);
  EXPECT_THROW(WeightVector::from_map(reg, {{"nope:out", 1.0}}), DataError);
}

TEST(Weights, BareKeyAssignsBothDirections) {
  InteractionSchema s;
  s.tags = {"user", "course"};
  s.interactions = {{"a", "user", "course", true}, {"b", "user", "user", false}};
  auto reg = register_schema(s);
  auto w = WeightVector::from_map(reg, {{"a", 0.5}, {"b", 0.25}});
  EXPECT_DOUBLE_EQ(w.base_weight(*reg.find("a", Direction::Out)), 0.5);
  EXPECT_DOUBLE_EQ(w.base_weight(*reg.find("a", Direction::In)), 0.5);
  EXPECT_DOUBLE_EQ(w.base_weight(*reg.find("b", Direction::Out)), 0.25);
  // double assignment rejected
  EXPECT_THROW(WeightVector::from_map(reg, {{"a", 0.5}, {"a:out", 0.7}}), DataError);
}

TEST(Records, BindValidatesAndFillsSymmetric) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u1", "u2", "user", "follow_user"),
                                         rec("u1", "c1", "course", "follow_course")};
  bind_records(records, reg);
  EXPECT_FALSE(records[0].symmetric);
  EXPECT_TRUE(records[1].symmetric);

  std::vector<InteractionRecord> bad{rec("u1", "c1", "course", "nope")};
  EXPECT_THROW(bind_records(bad, reg), DataError);
}

TEST(Records, FilterKnownDropsUnknown) {
  auto reg = register_schema(edu_schema());
  std::vector<InteractionRecord> records{rec("u1", "c1", "course", "follow_course"),
                                         rec("u1", "x1", "widget", "poke"),
                                         rec("u1", "u1", "user", "follow_user")};
  auto dropped = filter_known(records, reg);
  EXPECT_EQ(dropped, 2u);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].interaction, "follow_course");
}
