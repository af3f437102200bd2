#include <gtest/gtest.h>

#include <cmath>

#include "hetrec/fitness.hpp"
#include "hetrec/ga.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/interaction.hpp"
#include "oracles.hpp"

using namespace hetrec;

namespace {

GaConfig paper_config() {
  GaConfig c;
  c.population_size = 10;
  c.parents_mating = 4;
  c.mutation_gene_fraction = 0.10;
  c.mutation_low = -0.3;
  c.mutation_high = 0.3;
  c.gene_min = 0.01;
  c.gene_max = 2.0;
  c.max_generations = 200;
  c.patience = 20;
  c.rng_seed = 1;
  return c;
}

}  // namespace

TEST(InitPopulation, SizesAndRange) {
  auto cfg = paper_config();
  auto pop = init_population(cfg, 22);
  ASSERT_EQ(pop.size(), 10u);
  for (const auto& genome : pop) {
    ASSERT_EQ(genome.size(), 22u);
    for (double g : genome) {
      EXPECT_GE(g, 0.01);
      EXPECT_LE(g, 2.0);
    }
  }
}

TEST(InitPopulation, DegenerateRangeGivesConstantGenes) {
  auto cfg = paper_config();
  cfg.gene_min = cfg.gene_max = 1.0;
  for (const auto& genome : init_population(cfg, 5))
    for (double g : genome) EXPECT_DOUBLE_EQ(g, 1.0);
}

TEST(InitPopulation, SeedDeterminism) {
  auto cfg = paper_config();
  EXPECT_EQ(init_population(cfg, 8), init_population(cfg, 8));
  cfg.rng_seed = 2;
  EXPECT_NE(init_population(cfg, 8), init_population(paper_config(), 8));
}

TEST(SelectParents, TopTwoByFitness) {
  std::vector<double> fitness{0.1, 0.9, 0.5, 0.7};
  auto idx = select_parent_indices(fitness, 2);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx[0], 1u);
  EXPECT_EQ(idx[1], 3u);
}

TEST(SelectParents, TiesBreakByIndex) {
  std::vector<double> fitness{0.5, 0.5, 0.5, 0.5};
  auto idx = select_parent_indices(fitness, 3);
  EXPECT_EQ(idx, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(SelectParents, WholePopulationWhenParentsEqualSize) {
  std::vector<double> fitness{0.2, 0.8, 0.4};
  auto idx = select_parent_indices(fitness, 3);
  EXPECT_EQ(idx, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(Crossover, IdenticalParentsReproduceExactly) {
  Genome p(12, 0.5);
  std::mt19937_64 rng(3);
  EXPECT_EQ(crossover_uniform(p, p, rng), p);
}

TEST(Crossover, LengthOneChildComesFromEitherParent) {
  Genome a{1.0}, b{2.0};
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    auto child = crossover_uniform(a, b, rng);
    EXPECT_TRUE(child[0] == 1.0 || child[0] == 2.0);
  }
  Genome wrong{1.0, 2.0};
  EXPECT_THROW(crossover_uniform(a, wrong, rng), ConfigError);
}

TEST(Crossover, GeneShareNearHalfAndSeedStable) {
  Genome a(1000, 0.01), b(1000, 2.0);
  std::mt19937_64 rng(1234);
  auto child = crossover_uniform(a, b, rng);
  long from_a = std::count(child.begin(), child.end(), 0.01);
  EXPECT_GE(from_a, 400);
  EXPECT_LE(from_a, 600);
  // Frozen after the first seeded run; guards the RNG consumption pattern.
  EXPECT_EQ(from_a, 513);
}

TEST(Mutate, ClampsToGeneRange) {
  auto cfg = paper_config();
  cfg.mutation_gene_fraction = 1.0;
  cfg.mutation_low = cfg.mutation_high = -0.3;  // deterministic delta
  std::mt19937_64 rng(5);
  auto out = mutate({0.02}, cfg, rng);
  EXPECT_DOUBLE_EQ(out[0], 0.01);
}

TEST(Mutate, TenPercentOfTwentyTwoIsTwoGenes) {
  auto cfg = paper_config();
  cfg.mutation_low = 0.05;  // strictly positive delta: mutated genes must change
  cfg.mutation_high = 0.3;
  std::mt19937_64 rng(6);
  Genome genome(22, 1.0);
  auto out = mutate(genome, cfg, rng);
  long changed = 0;
  for (std::size_t i = 0; i < genome.size(); ++i) changed += out[i] != genome[i];
  EXPECT_EQ(changed, 2);
}

TEST(Mutate, ZeroRangeLeavesGenomeUnchanged) {
  auto cfg = paper_config();
  cfg.mutation_low = cfg.mutation_high = 0.0;
  std::mt19937_64 rng(7);
  Genome genome{0.3, 1.7, 0.9};
  EXPECT_EQ(mutate(genome, cfg, rng), genome);
}

TEST(Evolve, AnalyticQuadraticConvergesWithMonotoneBest) {
  auto fitness = [](const Genome& g) {
    double s = 0.0;
    for (double x : g) s -= (x - 1.0) * (x - 1.0);
    return s;
  };
  for (std::uint64_t seed : {1ull, 2ull}) {
    auto cfg = paper_config();
    cfg.rng_seed = seed;
    cfg.mutation_gene_fraction = 0.25;  // 1 of 4 genes
    cfg.max_generations = 200;
    cfg.patience = 200;  // never stop early
    double prev_best = -1e300;
    bool bounds_ok = true;
    GaObserver observer = [&](int, const std::vector<Genome>& pop, std::span<const double>) {
      for (const auto& g : pop)
        for (double x : g) bounds_ok &= x >= cfg.gene_min && x <= cfg.gene_max;
    };
    auto result = evolve(fitness, cfg, 4, observer);
    EXPECT_TRUE(bounds_ok);
    for (const auto& row : result.history) {
      EXPECT_GE(row.best_fitness, prev_best);
      prev_best = row.best_fitness;
    }
    EXPECT_EQ(result.generations_run, 200);
    for (double g : result.best) EXPECT_NEAR(g, 1.0, 0.1) << "seed " << seed;
  }
}

TEST(Evolve, PatienceZeroRunsExactlyOneGeneration) {
  auto cfg = paper_config();
  cfg.patience = 0;
  auto result = evolve([](const Genome&) { return 1.0; }, cfg, 3);
  EXPECT_EQ(result.generations_run, 1);
  ASSERT_EQ(result.history.size(), 1u);
}

TEST(Evolve, PopulationSizeInvariant) {
  auto cfg = paper_config();
  cfg.max_generations = 10;
  cfg.patience = 10;
  GaObserver observer = [&](int, const std::vector<Genome>& pop, std::span<const double>) {
    EXPECT_EQ(pop.size(), 10u);
  };
  evolve([](const Genome& g) { return g[0]; }, cfg, 2, observer);
}

TEST(Evolve, SeedDeterminism) {
  auto fitness = [](const Genome& g) {
    double s = 0.0;
    for (double x : g) s -= (x - 0.7) * (x - 0.7);
    return s;
  };
  auto cfg = paper_config();
  cfg.max_generations = 30;
  auto a = evolve(fitness, cfg, 6);
  auto b = evolve(fitness, cfg, 6);
  EXPECT_EQ(a.best, b.best);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].best_fitness, b.history[i].best_fitness);
    EXPECT_EQ(a.history[i].mean_fitness, b.history[i].mean_fitness);
  }
}

TEST(Evolve, EarlyStopAfterPatienceOnFlatFitness) {
  auto cfg = paper_config();
  cfg.patience = 5;
  cfg.max_generations = 100;
  auto result = evolve([](const Genome&) { return 0.5; }, cfg, 3);
  // Generation 1 improves from -inf; then 5 stale generations.
  EXPECT_EQ(result.generations_run, 6);
}

TEST(Fitness, UndirectedGenomeMapsToBothDirections) {
  auto registry =
      register_schema(InteractionSchema::load(std::string(HETREC_CONFIG_DIR) + "/edu_schema.json"));
  ASSERT_EQ(registry.size(), 19u);
  ASSERT_EQ(registry.interaction_names().size(), 10u);
  Genome genes(10);
  for (std::size_t i = 0; i < genes.size(); ++i) genes[i] = 0.1 + 0.05 * static_cast<double>(i);
  auto w = WeightVector::from_genes(registry, genes, true);
  for (std::size_t i = 0; i < registry.interaction_names().size(); ++i) {
    const auto& name = registry.interaction_names()[i];
    auto out = registry.find(name, Direction::Out);
    ASSERT_TRUE(out);
    EXPECT_DOUBLE_EQ(w.base_weight(*out), genes[i]);
    if (auto in = registry.find(name, Direction::In)) {
      EXPECT_DOUBLE_EQ(w.base_weight(*in), genes[i]);
    }
  }
}

TEST(Fitness, Figure1UniformGenomeMatchesOracleMrr) {
  auto registry =
      register_schema(InteractionSchema::load(std::string(HETREC_CONFIG_DIR) + "/edu_schema.json"));
  auto records = load_interactions_csv(std::string(HETREC_FIXTURE_DIR) + "/figure1.csv");
  bind_records(records, registry);
  auto graph = build_graph(records, registry);

  FitnessContext ctx;
  ctx.graph = &graph;
  ctx.validation = {{"u3", {"c2"}, 0}, {"u1", {"c2"}, 0}, {"ghost", {"c1"}, 0}};
  ctx.request_template.target_tag = "course";
  ctx.request_template.k = 5;
  ctx.solver = {0.3, 1e-12, 1000};

  // Expected MRR from the dense linear-solve oracle, ranked independently.
  auto matrix = build_transition(graph, WeightVector::uniform(registry));
  double expected_sum = 0.0;
  for (const std::string user : {"u3", "u1"}) {
    auto ref = oracle::ppr_linear_solve(matrix, *graph.find_vertex("user", user), 0.3);
    std::vector<std::pair<double, std::string>> ranked;
    for (VertexIndex v : graph.vertices_with_tag("course"))
      ranked.push_back({ref[v], graph.vertex(v).id});
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::string> ids;
    for (auto& [_, id] : ranked) ids.push_back(id);
    expected_sum += oracle::brute_rr_at_k(ids, {"c2"}, 5);
  }
  const double expected = expected_sum / 2.0;  // ghost user skipped

  std::size_t skipped = 0;
  Genome uniform(ctx.gene_count(), 1.0);
  const double fitness = evaluate_fitness(uniform, ctx, &skipped);
  EXPECT_EQ(skipped, 1u);
  EXPECT_NEAR(fitness, expected, 1e-9);
}

TEST(Fitness, AlternativeMetricsFollowTheOracleRank) {
  auto registry =
      register_schema(InteractionSchema::load(std::string(HETREC_CONFIG_DIR) + "/edu_schema.json"));
  auto records = load_interactions_csv(std::string(HETREC_FIXTURE_DIR) + "/figure1.csv");
  bind_records(records, registry);
  auto graph = build_graph(records, registry);

  FitnessContext ctx;
  ctx.graph = &graph;
  ctx.validation = {{"u1", {"c2"}, 0}};
  ctx.request_template.target_tag = "course";
  ctx.request_template.k = 5;
  ctx.solver = {0.3, 1e-12, 1000};
  Genome uniform(ctx.gene_count(), 1.0);

  // Rank of c2 for u1 from the independent oracle.
  auto matrix = build_transition(graph, WeightVector::uniform(registry));
  auto ref = oracle::ppr_linear_solve(matrix, *graph.find_vertex("user", "u1"), 0.3);
  std::vector<std::pair<double, std::string>> ranked;
  for (VertexIndex v : graph.vertices_with_tag("course"))
    ranked.push_back({ref[v], graph.vertex(v).id});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::size_t rank = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (ranked[i].second == "c2") rank = i + 1;
  ASSERT_GE(rank, 1u);

  ctx.metric = FitnessMetric::MRR;
  EXPECT_NEAR(evaluate_fitness(uniform, ctx), 1.0 / static_cast<double>(rank), 1e-12);
  ctx.metric = FitnessMetric::MAP;  // single truth item: MAP == MRR
  EXPECT_NEAR(evaluate_fitness(uniform, ctx), 1.0 / static_cast<double>(rank), 1e-12);
  ctx.metric = FitnessMetric::NDCG;
  EXPECT_NEAR(evaluate_fitness(uniform, ctx), 1.0 / std::log2(static_cast<double>(rank) + 1.0),
              1e-12);
}

TEST(Fitness, EmptyValidationRejected) {
  auto registry =
      register_schema(InteractionSchema::load(std::string(HETREC_CONFIG_DIR) + "/edu_schema.json"));
  auto records = load_interactions_csv(std::string(HETREC_FIXTURE_DIR) + "/figure1.csv");
  bind_records(records, registry);
  auto graph = build_graph(records, registry);
  FitnessContext ctx;
  ctx.graph = &graph;
  ctx.request_template.target_tag = "course";
  Genome genome(ctx.gene_count(), 1.0);
  EXPECT_THROW(evaluate_fitness(genome, ctx), DataError);
  ctx.validation = {{"ghost", {"c1"}, 0}};
  EXPECT_THROW(evaluate_fitness(genome, ctx), DataError);
}

TEST(GaConfig, Validation) {
  GaConfig bad = paper_config();
  bad.parents_mating = 1;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = paper_config();
  bad.population_size = 3;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = paper_config();
  bad.mutation_gene_fraction = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = paper_config();
  bad.gene_min = -0.1;
  EXPECT_THROW(bad.validate(), ConfigError);
}
