#include <doctest.h>

#include <random>

#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/report.hpp"
#include "farmvoice/metrics/statistics.hpp"
#include "farmvoice/metrics/text.hpp"
#include "farmvoice/metrics/wer.hpp"
#include "oracles.hpp"

#include <boost/math/special_functions/beta.hpp>

using namespace fv;
using namespace fv::metrics;
using Tokens = std::vector<std::string>;

namespace {

std::string random_string(std::mt19937_64& rng, std::size_t max_len, std::string_view alphabet) {
  std::string s;
  const auto len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

Tokens random_tokens(std::mt19937_64& rng, std::size_t max_len) {
  static const Tokens words = {"a", "b", "c", "d"};
  Tokens out(rng() % (max_len + 1));
  for (auto& w : out) w = words[rng() % words.size()];
  return out;
}

std::vector<PairedSample> pairs_from_differences(const std::vector<double>& d) {
  std::vector<PairedSample> out;
  for (double x : d) out.push_back({10.0, 10.0 + x});
  return out;
}

}  // namespace

TEST_CASE("normalize") {
  CHECK(normalize("The cow, eats.") == Tokens{"the", "cow", "eats"});
  CHECK(normalize("").empty());
  CHECK(normalize("GPS  field\ttracking") == Tokens{"gps", "field", "tracking"});
  CHECK(normalize("«Grüße», (ok)!") == Tokens{"grüße", "ok"});
  CHECK(normalize("don't ... stop") == Tokens{"don't", "stop"});
  CHECK(normalize("The Cow.", {false, false}) == Tokens{"The", "Cow."});
  CHECK(normalize("a b") == Tokens{"a", "b"});
}

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("kitten", "sitting") == oracle::edit_distance(U"kitten", U"sitting"));
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("ä", "a") == 1);
  CHECK(levenshtein("Grüße", "Gruesse") == oracle::edit_distance(U"Grüße", U"Gruesse"));
}

TEST_CASE("levenshtein equals the oracles and is a metric") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 400; ++i) {
    const auto a = random_string(rng, 12, "abcd");
    const auto b = random_string(rng, 12, "abcd");
    const auto c = random_string(rng, 12, "abcd");
    const auto ab = levenshtein(a, b);
    REQUIRE(ab == oracle::edit_distance(utf8::decode(a), utf8::decode(b)));
    CHECK(ab == levenshtein(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(levenshtein(a, c) <= ab + levenshtein(b, c));
  }
  for (int i = 0; i < 200; ++i) {
    const auto a = random_string(rng, 6, "abc");
    const auto b = random_string(rng, 6, "abc");
    CHECK(levenshtein(a, b) == oracle::edit_distance_recursive(a, b));
  }
}

TEST_CASE("align examples") {
  const Tokens abc{"a", "b", "c"};
  CHECK(align(abc, abc) == TokenAlignment{0, 0, 0, 3});
  CHECK(align(abc, Tokens{"a", "x", "c"}) == TokenAlignment{1, 0, 0, 3});
  const auto t = align(Tokens{"a", "b", "c", "d"}, Tokens{"a", "c", "d", "e"});
  CHECK(t == TokenAlignment{0, 1, 1, 4});
  CHECK(t.cost() == 2);
  CHECK(align(Tokens{}, Tokens{"x", "y"}) == TokenAlignment{0, 0, 2, 0});
  CHECK(align(abc, Tokens{}) == TokenAlignment{0, 3, 0, 3});
}

TEST_CASE("align is minimal against exhaustive edit scripts") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 600; ++i) {
    const auto ref = random_tokens(rng, 6);
    const auto hyp = random_tokens(rng, 6);
    const auto got = align(ref, hyp);
    const auto scripts = oracle::all_edit_scripts(ref, hyp);
    std::size_t best = SIZE_MAX;
    for (auto [s, d, n] : scripts) best = std::min(best, s + d + n);
    CHECK(got.cost() == best);
    CHECK(scripts.count({got.substitutions, got.deletions, got.insertions}) == 1);
    CHECK(got.reference_length == ref.size());
    // Among optimal scripts, substitutions are preferred over delete+insert.
    std::size_t max_sub = 0;
    for (auto [s, d, n] : scripts) {
      if (s + d + n == best) max_sub = std::max(max_sub, s);
    }
    CHECK(got.substitutions == max_sub);
  }
}

TEST_CASE("word error rate") {
  CHECK(word_error_rate({0, 0, 0, 10}) == 0.0);
  CHECK(word_error_rate({2, 1, 0, 10}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(word_error_rate({0, 0, 5, 4}) == 1.25);
  CHECK_THROWS_WITH_AS(word_error_rate({0, 0, 1, 0}), doctest::Contains("reference"), Error);
}

TEST_CASE("length metrics") {
  const BaselineText base("the field is dry");
  const auto same = length_metrics(base.text(), base);
  CHECK(same.byte_difference == 0);
  CHECK(same.character_difference == 0);

  const auto umlaut = length_metrics("ä", BaselineText("a"));
  CHECK(umlaut.target_bytes == 2);
  CHECK(umlaut.target_characters == 1);

  std::string text(1572 - 25, 'x');
  for (int i = 0; i < 25; ++i) text += "ü";
  const BaselineText study_sized(text);
  REQUIRE(study_sized.source_bytes() == 1597);
  const auto empty = length_metrics("", study_sized);
  CHECK(empty.byte_difference == -1597);
  CHECK(empty.character_difference == -1572);
}

TEST_CASE("aggregate") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto a = aggregate(v);
  CHECK(a.mean == 3.0);
  REQUIRE(a.sd);
  CHECK(*a.sd == doctest::Approx(oracle::two_pass({1, 2, 3, 4, 5}).sd));
  CHECK(*a.sd == doctest::Approx(1.5811).epsilon(1e-4));
  CHECK(*aggregate(std::vector<double>{7, 7, 7}).sd == 0.0);
  const auto b = aggregate(std::vector<double>{0.30, 0.30});
  CHECK(b.mean == doctest::Approx(0.30));
  CHECK(*b.sd == 0.0);
  CHECK_THROWS_AS(aggregate(std::vector<double>{1.0}), Error);
  CHECK_FALSE(aggregate(std::vector<double>{1.0}, false).sd);
}

TEST_CASE("aggregate matches a naive two-pass computation") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(50.0, 20.0);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(2 + rng() % 30);
    for (auto& x : v) x = noise(rng);
    const auto got = aggregate(v);
    const auto want = oracle::two_pass(v);
    CHECK(std::abs(got.mean - want.mean) < 1e-12);
    CHECK(std::abs(*got.sd - want.sd) < 1e-12);
  }
}

TEST_CASE("regularized incomplete beta agrees with Boost") {
  for (double a : {0.5, 1.0, 2.0, 4.5, 10.0}) {
    for (double b : {0.5, 1.0, 3.0}) {
      for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0}) {
        CHECK(regularized_incomplete_beta(a, b, x) == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("paired t-test fixture d = 1..5") {
  const auto r = paired_t_one_tailed(pairs_from_differences({1, 2, 3, 4, 5}), Orientation::HigherIsWorse);
  double t = 0;
  const double p = oracle::upper_tail_p({1, 2, 3, 4, 5}, &t);
  REQUIRE(r.t_statistic);
  CHECK(*r.t_statistic == doctest::Approx(t).epsilon(1e-12));
  CHECK(*r.t_statistic == doctest::Approx(4.2426).epsilon(1e-4));
  CHECK(r.degrees_of_freedom == 4);
  CHECK(std::abs(r.p_value - p) < 1e-9);
  CHECK(r.p_value == doctest::Approx(0.0066).epsilon(0.01));
  CHECK(r.significant);
}

TEST_CASE("paired t-test against Boost on random samples") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.3, 1.0);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 3 + rng() % 8;
    std::vector<PairedSample> pairs(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      pairs[i] = {noise(rng), noise(rng)};
      d[i] = pairs[i].field - pairs[i].office;
    }
    const auto r = paired_t_one_tailed(pairs, Orientation::HigherIsWorse);
    CHECK(std::abs(r.p_value - oracle::upper_tail_p(d)) < 1e-9);
    CHECK(r.significant == (r.p_value < kDefaultAlpha));

    const auto flipped_result = paired_t_one_tailed(pairs, Orientation::LowerIsWorse);
    CHECK(std::abs(flipped_result.p_value - (1.0 - r.p_value)) < 1e-9);
  }
}

TEST_CASE("paired t-test edge cases") {
  const auto zero = paired_t_one_tailed(pairs_from_differences({0, 0, 0, 0, 0}), Orientation::HigherIsWorse);
  CHECK(zero.zero_variance);
  CHECK_FALSE(zero.t_statistic);
  CHECK(zero.p_value == 1.0);

  const auto constant = paired_t_one_tailed(pairs_from_differences({2, 2, 2}), Orientation::HigherIsWorse);
  CHECK(constant.zero_variance);
  CHECK(constant.p_value == 0.0);
  CHECK(constant.significant);

  const auto improved = paired_t_one_tailed(pairs_from_differences({-1, -2, -1, -3, -2}), Orientation::HigherIsWorse);
  CHECK(improved.p_value > 0.5);
  CHECK(std::abs(improved.p_value - oracle::upper_tail_p({-1, -2, -1, -3, -2})) < 1e-9);

  CHECK_THROWS_AS(paired_t_one_tailed(pairs_from_differences({1}), Orientation::HigherIsWorse), Error);
}

namespace {

ReportInput small_input() {
  ReportInput in;
  in.baseline.emplace("the farmer drives the tractor across the wet field");
  in.entries = {
      {"P1", NoiseSetting::Office, "the farmer drives the tractor across the wet field"},
      {"P1", NoiseSetting::Field, "the farmer drive the tractor across wet field"},
      {"P2", NoiseSetting::Office, "the farmer drives a tractor across the wet field"},
      {"P2", NoiseSetting::Field, "a farmer drives the tractor cross the the wet field"},
      {"P3", NoiseSetting::Office, "the farmer drives the tractor across the wet field"},
      {"P3", NoiseSetting::Field, "the farmer drives tractor across the field"},
  };
  return in;
}

}  // namespace

TEST_CASE("build_report rows, aggregates and comparisons") {
  const auto r = build_report(small_input());
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows[0].participant == "P1");
  CHECK(r.rows[0].setting == NoiseSetting::Office);
  CHECK(r.rows[1].alignment == TokenAlignment{1, 1, 0, 9});
  CHECK(r.baseline.reference_words == 9);
  REQUIRE(r.aggregates.size() == 2);
  REQUIRE(r.comparisons.size() == kComparedMetrics.size());
  CHECK(r.comparisons[0].metric == "wer");
  CHECK(r.comparisons[2].orientation == Orientation::LowerIsWorse);

  std::vector<double> wer_field;
  for (const auto& row : r.rows) {
    CHECK(row.lengths.byte_difference ==
          static_cast<long long>(row.lengths.target_bytes) - static_cast<long long>(r.baseline.source_bytes));
    if (row.setting == NoiseSetting::Field) wer_field.push_back(row.wer);
  }
  const auto want = oracle::two_pass(wer_field);
  CHECK(std::abs(r.aggregates[1].of(Metric::WordErrorRate).mean - want.mean) < 1e-12);
  CHECK(std::abs(*r.aggregates[1].of(Metric::WordErrorRate).sd - want.sd) < 1e-12);
}

TEST_CASE("build_report edge cases") {
  auto single = small_input();
  single.entries.resize(2);
  const auto one = build_report(single);
  CHECK(one.rows.size() == 2);
  CHECK(one.comparisons.empty());
  REQUIRE_FALSE(one.warnings.empty());
  CHECK(one.warnings.back().find("InsufficientPairs") == 0);

  auto unpaired = small_input();
  unpaired.entries.pop_back();
  const auto up = build_report(unpaired);
  CHECK(up.comparisons.size() == kComparedMetrics.size());
  CHECK(up.comparisons[0].n == 2);
  CHECK(up.warnings.front().find("UnpairedParticipant") == 0);
  CHECK(up.warnings.front().find("P3") != std::string::npos);

  auto identity = small_input();
  for (auto& e : identity.entries) e.text = identity.baseline->text();
  const auto id = build_report(identity);
  for (const auto& row : id.rows) {
    CHECK(row.wer == 0.0);
    CHECK(row.lengths.byte_difference == 0);
  }
  for (const auto& c : id.comparisons) CHECK(c.zero_variance);

  auto missing = small_input();
  missing.baseline.reset();
  CHECK_THROWS_AS(build_report(missing), Error);
  try {
    build_report(missing);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingBaseline);
  }

  auto dup = small_input();
  dup.entries.push_back(dup.entries.front());
  CHECK_THROWS_AS(build_report(dup), Error);
}

TEST_CASE("report serialization is deterministic and lossless") {
  const auto a = build_report(small_input());
  const auto b = build_report(small_input());
  CHECK(to_json(a) == to_json(b));
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_json(report_from_json(to_json(a))) == to_json(a));
  const auto csv = to_csv(a);
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find("P1,field,0.2222,") != std::string::npos);
  CHECK(to_json(a).back() == '\n');
  CHECK(render_summary_table(a).find("Word Error Rate") != std::string::npos);
}
