#include "cfnc/nc_builder.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cfnc;

namespace {

const Power kTen = Power::from_linear(10.0);

CandidateTable make_table(int relay, std::vector<CodingVector> vectors, std::vector<double> rates) {
  CandidateTable t;
  t.relay_index = relay;
  t.vectors = std::move(vectors);
  t.rates = std::move(rates);
  t.units = RateUnits::nats;
  return t;
}

std::vector<CandidateTable> reference_tables() {
  const std::vector<std::vector<double>> hs = {
      {0.9730, 0.4674, 0.5103}, {-1.7291, 0.7166, -0.5856}, {-0.3912, 1.4407, -0.8115}};
  std::vector<CandidateTable> tables;
  for (std::size_t m = 0; m < hs.size(); ++m) {
    tables.push_back(candidate_set(ChannelVector(hs[m], static_cast<int>(m)), kTen, 5, RateUnits::nats));
  }
  return tables;
}

// Tables drawn from a tiny alphabet so that singular assemblies and outright
// failures are common.
// With `flat` every vector has a[last] == a[0], so some draws leave no nonsingular assembly.
std::vector<CandidateTable> random_synthetic_tables(std::size_t relays, std::size_t t_max, std::mt19937_64& rng,
                                                   bool flat = false) {
  std::uniform_int_distribution<int> coord(-1, 1);
  std::uniform_int_distribution<int> level(1, 6);
  std::vector<CandidateTable> tables;
  for (std::size_t m = 0; m < relays; ++m) {
    std::vector<CodingVector> vs;
    std::vector<double> rs;
    for (std::size_t k = 0; k < t_max; ++k) {
      std::vector<std::int64_t> a(relays, 0);
      while (std::all_of(a.begin(), a.end(), [](auto v) { return v == 0; })) {
        for (auto& v : a) v = coord(rng);
        if (flat) a.back() = a.front();
      }
      vs.emplace_back(a);
      rs.push_back(0.1 * level(rng));  // coarse grid forces ties across relays
    }
    std::sort(rs.rbegin(), rs.rend());
    tables.push_back(make_table(static_cast<int>(m), std::move(vs), std::move(rs)));
  }
  return tables;
}

}  // namespace

TEST_SUITE("nc_builder") {

TEST_CASE("exact_determinant examples") {
  CHECK(exact_determinant({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == 1);
  CHECK(exact_determinant({{1, 0, 0}, {1, 0, 0}, {0, -1, 1}}) == 0);
  CHECK(exact_determinant({{1, 0, 0}, {2, -1, 1}, {0, 1, 0}}) == -1);
  CHECK(exact_determinant({{0, 1}, {1, 0}}) == -1);
  CHECK(exact_determinant({{7}}) == 7);
  CHECK_THROWS_AS(exact_determinant({{1, 0}, {1}}), std::invalid_argument);
}

TEST_CASE("exact_determinant survives 128-bit overflow") {
  // Second elimination step needs ~2^248; the arbitrary-precision path takes over.
  const std::int64_t big = std::int64_t{1} << 62;
  const std::vector<CodingVector> huge{{big, 1, 0}, {1, big, 1}, {0, 1, big}};
  BigInt b = big;
  CHECK(exact_determinant(huge) == b * b * b - 2 * b);
}

TEST_CASE("property: Bareiss agrees with cofactor expansion") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> coord(-4, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 5;
    std::vector<CodingVector> rows;
    while (rows.size() < n) {
      std::vector<std::int64_t> r(n);
      for (auto& v : r) v = coord(rng);
      if (std::any_of(r.begin(), r.end(), [](auto v) { return v != 0; })) rows.emplace_back(r);
    }
    if (trial % 7 == 0 && n > 1) rows[n - 1] = rows[0];  // force some singular cases
    CHECK(exact_determinant(rows) == testing::laplace_determinant(testing::to_rows(rows)));
  }
}

TEST_CASE("global_rate_order") {
  const auto order = global_rate_order(reference_tables());
  REQUIRE(order.size() == 15);
  const double expected[] = {0.7087, 0.6785, 0.5987, 0.5935, 0.5572, 0.4846};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(order[i].rate - expected[i]) < 1e-3);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) CHECK(order[i].rate >= order[i + 1].rate);

  const auto tied = global_rate_order({make_table(0, {{1}, {2}, {3}}, {0.4, 0.4, 0.4})});
  REQUIRE(tied.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(tied[i].index == i);

  const auto merged = global_rate_order({make_table(0, {{1, 0}, {0, 1}}, {0.9, 0.5}),
                                         make_table(1, {{1, 0}, {0, 1}}, {0.7, 0.3})});
  const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(merged[i].relay == want[i].first);
    CHECK(merged[i].index == want[i].second);
  }
}

TEST_CASE("cut_sets") {
  const auto tables = reference_tables();
  const auto order = global_rate_order(tables);
  const auto& gamma4 = order[3];
  CHECK(gamma4.relay == 2);
  CHECK(gamma4.index == 1);
  const auto cuts = cut_sets(gamma4, tables);
  CHECK(cuts[0].empty());
  REQUIRE(cuts[1].size() == 2);
  CHECK(cuts[1][0].same_up_to_sign({1, 0, 0}));
  CHECK(cuts[1][1].same_up_to_sign({2, -1, 1}));
  REQUIRE(cuts[2].size() == 1);
  CHECK(cuts[2][0].same_up_to_sign({0, 1, 0}));

  const auto top = cut_sets(order[0], tables);
  CHECK(top[0].empty());
  CHECK(top[1].size() == 1);
  CHECK(top[2].empty());

  GlobalRateEntry floor{0.0, 0, 3};
  const auto all = cut_sets(floor, tables);
  CHECK(all[0].size() == 1);
  CHECK(all[0][0] == tables[0].vectors[3]);
  CHECK(all[1].size() == 5);
  CHECK(all[2].size() == 5);
}

TEST_CASE("find_full_rank") {
  CHECK_FALSE(find_full_rank({{}, {{1, 0, 0}}, {{0, 1, 0}}}).has_value());
  const auto id = find_full_rank({{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}});
  REQUIRE(id.has_value());
  CHECK(abs(id->determinant()) == 1);
  CHECK_FALSE(find_full_rank({{{1, 0}}, {{2, 0}}}).has_value());
  // First nonsingular assembly in lexicographic index order.
  const auto pick = find_full_rank({{{1, 0}, {0, 1}}, {{1, 0}, {1, 1}}});
  REQUIRE(pick.has_value());
  CHECK(pick->row(0) == CodingVector({1, 0}));
  CHECK(pick->row(1) == CodingVector({1, 1}));
}

TEST_CASE("construct_system_matrix on the reference tables") {
  const auto tables = reference_tables();
  std::vector<GammaCheck> trace;
  const auto out = construct_system_matrix(tables, {}, &trace);
  REQUIRE(out.has_value());
  CHECK(out->matrix.row(0).same_up_to_sign({1, 0, 0}));
  CHECK(out->matrix.row(1).same_up_to_sign({2, -1, 1}));
  CHECK(out->matrix.row(2).same_up_to_sign({0, 1, 0}));
  CHECK(std::abs(out->bottleneck_rate - 0.4846) < 1e-3);
  CHECK(out->matrix.full_rank());
  CHECK(out->checked_count == trace.size());
  REQUIRE(trace.size() >= 2);
  CHECK(trace.front().position == 3);
  CHECK(trace[1].position == 4);
  CHECK_FALSE(trace[1].achievable);
  CHECK(trace[1].cuts[0].empty());
  CHECK(trace.back().achievable);
  for (std::size_t m = 0; m < 3; ++m) CHECK(tables[m].vectors[out->chosen[m]] == out->matrix.row(m));

  const auto from_one = construct_system_matrix(tables, {.start_position = 1});
  REQUIRE(from_one.has_value());
  CHECK(from_one->bottleneck_rate == out->bottleneck_rate);
  CHECK(from_one->matrix.rows() == out->matrix.rows());
}

TEST_CASE("construct_system_matrix edge cases") {
  const auto single = construct_system_matrix({make_table(0, {{1}}, {0.3})});
  REQUIRE(single.has_value());
  CHECK(single->bottleneck_rate == 0.3);
  CHECK(single->matrix.row(0) == CodingVector({1}));

  const auto dead = construct_system_matrix(
      {make_table(0, {{1, 0}, {2, 0}}, {0.5, 0.2}), make_table(1, {{3, 0}, {1, 0}}, {0.6, 0.1})});
  CHECK_FALSE(dead.has_value());

  CHECK_THROWS_AS(construct_system_matrix({}), std::invalid_argument);
  CHECK_THROWS_AS(construct_system_matrix({make_table(0, {{1, 0}}, {0.5})}), std::invalid_argument);
}

TEST_CASE("property: builder matches brute force over all assemblies") {
  std::mt19937_64 rng(1234);
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CandidateTable> tables;
    if (trial % 2 == 0) {
      tables = random_synthetic_tables(3, 4, rng, trial % 6 == 0);
    } else {
      for (int m = 0; m < 3; ++m) {
        tables.push_back(candidate_set(ChannelVector(testing::random_channel(3, rng), m), kTen, 4, RateUnits::nats));
      }
    }
    const auto got = construct_system_matrix(tables);
    const auto want = testing::brute_force_maxmin(tables);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) {
      ++failures;
      continue;
    }
    CHECK(got->bottleneck_rate == *want);
    CHECK(got->matrix.full_rank());
    CHECK(got->bottleneck_rate <= std::min({tables[0].rates[0], tables[1].rates[0], tables[2].rates[0]}));
    for (std::size_t m = 0; m < 3; ++m) CHECK(tables[m].rates[got->chosen[m]] >= got->bottleneck_rate);
  }
  CHECK(failures > 0);  // the synthetic tables do exercise the failure path
}

TEST_CASE("property: upper bound, T_max monotonicity and sign invariance") {
  std::mt19937_64 rng(4321);
  std::uniform_real_distribution<double> pdb(0.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const Power p = Power::from_db(pdb(rng));
    std::vector<CandidateTable> full;
    for (std::size_t m = 0; m < n; ++m) {
      full.push_back(candidate_set(ChannelVector(testing::random_channel(n, rng), static_cast<int>(m)), p, 5,
                                   RateUnits::nats));
    }

    std::vector<CodingVector> best_rows;
    double cap = full[0].rates[0];
    for (const auto& t : full) {
      best_rows.push_back(t.vectors[0]);
      cap = std::min(cap, t.rates[0]);
    }
    const auto out5 = construct_system_matrix(full);
    if (out5) {
      CHECK(out5->bottleneck_rate <= cap);
      if (exact_determinant(best_rows) != 0) CHECK(out5->bottleneck_rate == cap);
    }

    double previous = -1.0;
    for (std::size_t len = 1; len <= 5; ++len) {
      auto cut = full;
      for (auto& t : cut) {
        t.vectors.resize(len);
        t.rates.resize(len);
      }
      const auto out = construct_system_matrix(cut);
      const double rate = out ? out->bottleneck_rate : 0.0;
      CHECK(rate >= previous);
      previous = rate;
    }

    auto flipped = full;
    for (auto& t : flipped) {
      for (std::size_t k = 0; k < t.size(); k += 2) t.vectors[k] = t.vectors[k].negated();
    }
    const auto out_flip = construct_system_matrix(flipped);
    CHECK(out_flip.has_value() == out5.has_value());
    if (out5 && out_flip) CHECK(out_flip->bottleneck_rate == out5->bottleneck_rate);
  }
}

}  // TEST_SUITE
