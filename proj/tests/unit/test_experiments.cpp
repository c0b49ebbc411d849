#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mxspec/error.hpp"
#include "mxspec/experiments.hpp"
#include "mxspec/generators.hpp"
#include "mxspec/rng.hpp"

using namespace mxspec;

namespace {

Partition copies(std::vector<int> labels) {
  Partition p;
  p.labels = std::move(labels);
  p.clusters = 2;
  return p;
}

std::string csv(const SweepResult& r) {
  std::ostringstream out;
  r.write_csv(out);
  return out.str();
}

}  // namespace

TEST_CASE("fraction of copies together") {
  CHECK(fraction_copies_together(copies({0, 1, 1, 0, 0, 1, 1, 0}), 4, 2) == 1.0);
  CHECK(fraction_copies_together(copies({0, 0, 0, 0, 1, 1, 1, 1}), 4, 2) == 0.0);
  CHECK(fraction_copies_together(copies({0, 0, 1, 1, 0, 1, 1, 1}), 4, 2) == 0.75);
  CHECK(fraction_copy_pairs_together(copies({0, 0, 0, 0, 1, 0}), 2, 3) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(fraction_copies_together(copies({0, 1}), 4, 2), Error);
}

TEST_CASE("regime classification") {
  const auto g = gen_overlap_multiplex(8, 1.0, 0.0, 1);
  std::vector<int> split(16, 0);
  for (int i = 8; i < 16; ++i) split[i] = 1;
  CHECK(classify_regime(copies(split), g.planted1, g.planted2, 2) == RegimeLabel::kLayersSplit);
  CHECK(classify_regime(lift_to_copies(g.planted1, 2), g.planted1, g.planted2, 2) == RegimeLabel::kLayer1);
  CHECK(classify_regime(lift_to_copies(g.planted2, 2), g.planted1, g.planted2, 2) == RegimeLabel::kLayer2);
  auto swapped = lift_to_copies(g.planted2, 2);
  for (auto& l : swapped.labels) l = 1 - l;
  CHECK(classify_regime(swapped, g.planted1, g.planted2, 2) == RegimeLabel::kLayer2);
  CHECK_THROWS_AS(classify_regime(copies(split), g.planted1, g.planted2, 3), Error);

  // A random labeling of 200 copies almost never coincides with one of six target labelings.
  const auto big = gen_overlap_multiplex(100, 0.5, 0.5, 2);
  Rng rng(17);
  int other = 0;
  for (int t = 0; t < 50; ++t) {
    Partition p;
    p.clusters = 2;
    for (int i = 0; i < 200; ++i) p.labels.push_back(static_cast<int>(rng.below(2)));
    other += classify_regime(p, big.planted1, big.planted2, 2) == RegimeLabel::kOther;
  }
  CHECK(other == 50);
}

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.1,0.5") == std::vector<double>{0.1, 0.5});
  const auto r = parse_grid("0:1:0.1");
  REQUIRE(r.size() == 11);
  CHECK(r[3] == 0.3);
  CHECK(r[10] == 1.0);
  CHECK_THROWS(parse_grid("1:0:0.1"));
  CHECK_THROWS(parse_grid("a,b"));
}

TEST_CASE("parallel_for covers every index") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 5) throw Error(module::kExperiments, "boom");
  }));
}

TEST_CASE("fixed sbm sweep is deterministic across job counts") {
  SweepOptions opts;
  opts.seed = 5;
  opts.instances = 3;
  opts.nodes = 20;
  const std::vector<double> ps{0.0, 0.3}, ws{0.5, 2.0};
  const std::vector<std::size_t> ks{2};
  opts.jobs = 1;
  const auto one = run_fixed_sbm_experiment(ps, ws, ks, opts);
  opts.jobs = 3;
  const auto three = run_fixed_sbm_experiment(ps, ws, ks, opts);
  CHECK(csv(one) == csv(three));

  // Adding a grid point leaves existing instances untouched.
  const std::vector<double> more{0.0, 0.15, 0.3};
  const auto extended = run_fixed_sbm_experiment(more, ws, ks, opts);
  for (const auto& row : one.rows) {
    bool found = false;
    for (const auto& other : extended.rows) {
      if (other.params == row.params && other.instance == row.instance && other.metric == row.metric) {
        CHECK(other.seed == row.seed);
        CHECK(other.value == row.value);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("aggregate rows equal instance means") {
  SweepOptions opts;
  opts.seed = 9;
  opts.instances = 4;
  opts.nodes = 16;
  const std::vector<double> ps{0.2, 0.6};
  const std::vector<std::size_t> ks{2, 3};
  ErOptions er;
  static_cast<SweepOptions&>(er) = opts;
  const auto r = run_er_experiment(ps, ks, Model::kDynamic, er);
  const auto agg = r.aggregate();
  CHECK(agg.size() == 2 * 2 * 2);
  for (const auto& a : agg) {
    double sum = 0;
    std::size_t count = 0;
    for (const auto& row : r.rows) {
      if (row.params == a.params && row.metric == a.metric) {
        sum += row.value;
        ++count;
      }
    }
    CHECK(count == a.count);
    CHECK(a.mean == sum / static_cast<double>(count));
  }
}

TEST_CASE("csv round trip and heatmap") {
  SweepOptions base;
  base.seed = 3;
  base.instances = 2;
  base.nodes = 12;
  OverlapOptions opts;
  static_cast<SweepOptions&>(opts) = base;
  const std::vector<double> ps{0.1, 0.9}, qs{0.1, 0.5, 0.9};
  const auto r = run_overlap_experiment(ps, qs, opts);
  std::istringstream in(csv(r));
  const auto back = SweepResult::read_csv(in);
  CHECK(csv(back) == csv(r));

  const auto grid = build_heatmap(r, "p", "q", "layers_split");
  CHECK(grid.xs == ps);
  CHECK(grid.ys == qs);
  const auto regime = build_heatmap(r, "p", "q", "regime");
  for (const auto& row : regime.values)
    for (double v : row) CHECK((v == 0 || v == 1 || v == 2 || v == 3));
  const auto filtered = build_heatmap(r, "p", "q", "layers_split", {{"p", "0.1"}});
  CHECK(filtered.xs == std::vector<double>{0.1});
  std::ostringstream out;
  grid.write_csv(out);
  CHECK(out.str().rfind("q\\p,0.1,0.9\n", 0) == 0);
  CHECK_THROWS(build_heatmap(r, "p", "nope", "regime"));
}

TEST_CASE("kway sweep reports recovery") {
  SweepOptions base;
  base.seed = 4;
  base.instances = 2;
  base.nodes = 40;
  OverlapOptions opts;
  static_cast<SweepOptions&>(opts) = base;
  opts.intra = 1.0;
  opts.inter = 0.0;
  const std::vector<double> ws{5.0};
  const std::vector<std::pair<double, double>> pq{};
  const auto r = run_overlap_kway(ws, pq, opts);
  for (const auto& row : r.rows)
    if (row.metric == "effective_clusters") CHECK(row.value == 4.0);
}

TEST_CASE("recovery threshold relaxes the exact match") {
  SweepOptions opts;
  opts.seed = 6;
  opts.instances = 3;
  opts.nodes = 20;
  const std::vector<double> ps{0.4}, ws{0.5};
  const std::vector<std::size_t> ks{2};
  const auto strict = run_fixed_sbm_experiment(ps, ws, ks, opts);
  opts.recovery_threshold = 0.5;
  const auto loose = run_fixed_sbm_experiment(ps, ws, ks, opts);
  for (std::size_t i = 0; i < strict.rows.size(); ++i) {
    if (strict.rows[i].metric == "recovered") {
      CHECK(loose.rows[i].value == 1.0);
      CHECK(loose.rows[i].value >= strict.rows[i].value);
    }
  }
  opts.recovery_threshold = 0.0;
  CHECK_THROWS_AS(run_fixed_sbm_experiment(ps, ws, ks, opts), Error);
}
