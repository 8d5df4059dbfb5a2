// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "../support/corpus.hpp"
#include "../support/live_server.hpp"
#include "../support/oracles.hpp"
#include "farmvoice/cli/commands.hpp"
#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/statistics.hpp"
#include "farmvoice/metrics/text.hpp"
#include "farmvoice/metrics/wer.hpp"
#include "farmvoice/reviews/classifier.hpp"
#include "farmvoice/reviews/distribution.hpp"
#include "farmvoice/reviews/preprocess.hpp"
#include "farmvoice/stt/inject.hpp"

using namespace fv;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failures of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ |= !ok;
  }
  bool failed() const { return failed_; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- Levenshtein -----------------------------------------------------------

void levenshtein_oracle(Check& c) {
  std::mt19937_64 rng(1000);
  auto random_string = [&] {
    std::string s(rng() % 13, 'a');
    for (auto& ch : s) ch = static_cast<char>('a' + rng() % 4);
    return s;
  };
  const auto t0 = Clock::now();
  for (int k = 0; k < 1000; ++k) {
    const auto a = random_string(), b = random_string(), x = random_string();
    const auto ab = metrics::levenshtein(a, b);
    c.expect(ab == oracle::edit_distance(utf8::decode(a), utf8::decode(b)), "oracle mismatch on " + a + "/" + b);
    const auto bx = metrics::levenshtein(b, x), ax = metrics::levenshtein(a, x);
    c.expect((ab == 0) == (a == b), "identity of indiscernibles");
    c.expect(ab == metrics::levenshtein(b, a), "symmetry");
    c.expect(ax <= ab + bx, "triangle inequality");
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
}

// --- WER -------------------------------------------------------------------

void wer_exactness(Check& c) {
  std::mt19937_64 rng(200);
  const auto t0 = Clock::now();
  int specs = 0;
  while (specs < 200) {
    const std::size_t n = 5 + rng() % 46;
    std::string ref;
    for (std::size_t i = 0; i < n; ++i) ref += (i ? " w" : "w") + std::to_string(rng() % 1000);
    const std::size_t s = rng() % (n / 2 + 1);
    const std::size_t d = rng() % (n - s + 1);
    const std::size_t i = rng() % (n / 2 + 1);
    // deletions next to insertions need more untouched words than min(d, i)
    if (d > 0 && i > 0 && n - s - d <= std::min(d, i)) continue;
    ++specs;
    const stt::ErrorInjectionSpec spec{s, d, i, rng()};
    try {
      const auto hyp = stt::inject_errors(ref, spec);
      const auto a = metrics::align(metrics::normalize(ref), metrics::normalize(hyp));
      const double expected = static_cast<double>(s + d + i) / static_cast<double>(n);
      c.expect(a.substitutions == s && a.deletions == d && a.insertions == i && a.reference_length == n,
               "alignment differs from spec");
      c.expect(std::abs(metrics::word_error_rate(a) - expected) < 1e-12, "WER differs from (s+d+i)/N");
    } catch (const Error& e) {
      c.expect(false, std::string("inject failed: ") + e.what());
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
}

// --- t-test ----------------------------------------------------------------

void t_test_oracle(Check& c) {
  std::mt19937_64 rng(50);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 3 + rng() % 8;
    std::vector<metrics::PairedSample> pairs(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      pairs[i] = {noise(rng), noise(rng) + 0.5};
      d[i] = pairs[i].field - pairs[i].office;
    }
    const auto r = metrics::paired_t_one_tailed(pairs, metrics::Orientation::HigherIsWorse);
    double t = 0;
    const double p = oracle::upper_tail_p(d, &t);
    c.expect(std::abs(r.p_value - p) < 1e-6, "p-value off for sample " + std::to_string(k));
    c.expect(r.t_statistic && std::abs(*r.t_statistic - t) < 1e-9, "t statistic off");
  }
  std::vector<metrics::PairedSample> fixture;
  for (double d : {1.0, 2.0, 3.0, 4.0, 5.0}) fixture.push_back({0.0, d});
  const auto r = metrics::paired_t_one_tailed(fixture, metrics::Orientation::HigherIsWorse);
  c.expect(r.t_statistic && std::abs(*r.t_statistic - 4.2426) < 5e-5, "fixture t");
  c.expect(std::abs(r.p_value - 0.0066) < 5e-5, "fixture p = " + std::to_string(r.p_value));
}

// --- report pipeline -------------------------------------------------------

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string w; in >> w;) {
    std::string t;
    for (char ch : w) {
      if (!std::ispunct(static_cast<unsigned char>(ch))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

// Word edit distance through the character oracle, one code point per word.
std::size_t word_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string, char32_t> ids;
  auto encode = [&](const std::vector<std::string>& v) {
    std::u32string s;
    for (const auto& w : v) s += ids.emplace(w, static_cast<char32_t>(0x100 + ids.size())).first->second;
    return s;
  };
  return oracle::edit_distance(encode(a), encode(b));
}

void report_pipeline(Check& c) {
  const std::string dir = std::string(FV_FIXTURES) + "/evaluation/";
  std::ostringstream out, err;
  const int code = cli::run({"evaluate", "--manifest", dir + "manifest.json"}, out, err);
  c.expect(code == 0, "evaluate exit code " + std::to_string(code));
  c.expect(out.str() == fixture::read_text(std::string(FV_GOLDEN) + "/report.json"), "bytes differ from golden");
  std::ostringstream csv;
  cli::run({"evaluate", "--manifest", dir + "manifest.json", "--format", "csv"}, csv, err);
  c.expect(csv.str() == fixture::read_text(std::string(FV_GOLDEN) + "/report.csv"), "CSV differs from golden");

  json report;
  try {
    report = json::parse(out.str());
  } catch (const std::exception& e) {
    c.expect(false, "report is not JSON");
    return;
  }
  const std::string baseline = fixture::evaluation_file("baseline.txt");
  const auto base_chars = utf8::decode(baseline);
  const auto base_words = words(baseline);
  c.expect(report["baseline"]["source_bytes"] == 1597 && baseline.size() == 1597, "source bytes");
  c.expect(report["baseline"]["source_characters"] == 1572 && base_chars.size() == 1572, "source characters");

  std::map<std::string, std::map<std::string, std::vector<double>>> series;  // setting -> metric -> values
  std::map<std::string, std::map<std::string, double>> by_participant[2];
  for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) {
    for (int s = 0; s < 2; ++s) {
      const std::string setting = s == 0 ? "office" : "field";
      const std::string text = fixture::evaluation_file(std::string(p) + "_" + setting + ".txt");
      const auto chars = utf8::decode(text);
      std::map<std::string, double> m = {
          {"wer", static_cast<double>(word_distance(base_words, words(text))) / base_words.size()},
          {"levenshtein", static_cast<double>(oracle::edit_distance(base_chars, chars))},
          {"target_bytes", static_cast<double>(text.size())},
          {"byte_difference", static_cast<double>(text.size()) - 1597.0},
          {"target_characters", static_cast<double>(chars.size())},
          {"character_difference", static_cast<double>(chars.size()) - 1572.0}};
      for (const auto& [k, v] : m) series[setting][k].push_back(v);
      by_participant[s][p] = m;
    }
  }
  for (const auto& [setting, metrics_] : series) {
    for (const auto& [metric, values] : metrics_) {
      const auto [mean, sd] = oracle::two_pass(values);
      const auto& agg = report["aggregates"][setting][metric];
      c.expect(std::abs(agg["mean"].get<double>() - mean) < 1e-9, setting + " " + metric + " mean");
      c.expect(std::abs(agg["sd"].get<double>() - sd) < 1e-9, setting + " " + metric + " sd");
    }
  }
  for (const auto& cmp : report["comparisons"]) {
    const std::string metric = cmp["metric"];
    const double sign = cmp["orientation"] == "higher_is_worse" ? 1.0 : -1.0;
    std::vector<double> d;
    for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) {
      d.push_back(sign * (by_participant[1][p][metric] - by_participant[0][p][metric]));
    }
    c.expect(std::abs(cmp["p_value"].get<double>() - oracle::upper_tail_p(d)) < 1e-9, metric + " p-value");
  }
}

// --- classifier ------------------------------------------------------------

void classifier_fixtures(Check& c) {
  using reviews::ReviewClass;
  auto label = [](const std::string& text) { return reviews::classify({"q", "app", "store", text, {}}); };
  c.expect(label(fixture::kOfflineReview) == reviews::Labels{ReviewClass::System, ReviewClass::Operations},
           "offline review");
  c.expect(label(fixture::kSupportReview) == reviews::Labels{ReviewClass::CustomerSupport}, "support review");
  c.expect(label(fixture::kHayReview) == reviews::Labels{ReviewClass::Operations}, "hay review");

  std::vector<reviews::Labels> labels;
  auto add = [&](std::size_t n, reviews::Labels l) { labels.insert(labels.end(), n, l); };
  add(583, {ReviewClass::System});
  add(66, {ReviewClass::System, ReviewClass::Operations});
  add(71, {ReviewClass::Operations});
  add(1, {ReviewClass::Operations, ReviewClass::CustomerSupport});
  add(42, {ReviewClass::CustomerSupport});
  add(21, {ReviewClass::System, ReviewClass::CustomerSupport});
  add(4, {ReviewClass::System, ReviewClass::Operations, ReviewClass::CustomerSupport});
  add(547, {});
  const auto r = reviews::distribution(labels);
  c.expect(r.total() == 1335, "total " + std::to_string(r.total()));
  c.expect(r.none == 547, "none");
  c.expect(r.with(ReviewClass::System) == 674, "system total");
}

// --- preprocessing ---------------------------------------------------------

void preprocessing(Check& c) {
  const auto corpus = fixture::synthetic_reviews();
  const auto a = reviews::preprocess(corpus);
  const auto b = reviews::preprocess(corpus);
  c.expect(a.kept.size() == 40, "survivors " + std::to_string(a.kept.size()));
  std::map<reviews::RemovalReason, int> reasons;
  for (const auto& r : a.removed) ++reasons[r.reason];
  c.expect(reasons[reviews::RemovalReason::Duplicate] == 3, "duplicates");
  c.expect(reasons[reviews::RemovalReason::LengthFilter] == 5, "short reviews");
  c.expect(reasons[reviews::RemovalReason::Spurious] == 2, "emoji reviews");
  c.expect(a.removed.size() == b.removed.size(), "determinism");
  for (std::size_t i = 0; i < std::min(a.removed.size(), b.removed.size()); ++i) {
    c.expect(a.removed[i].id == b.removed[i].id && a.removed[i].reason == b.removed[i].reason, "determinism");
  }
}

// --- service contract ------------------------------------------------------

void service_contract(Check& c) {
  fixture::LiveServer server;
  auto cl = server.client();
  using fixture::bearer;

  // auth gating
  for (const char* path : {"/v1/recordings", "/v1/submissions", "/v1/reports/study", "/v1/unknown"}) {
    auto res = cl.Get(path);
    c.expect(res && res->status == 401, std::string("unauthenticated GET ") + path);
  }
  c.expect(cl.Get("/v1/health")->status == 200, "health");
  const auto anna = fixture::login_token(cl, "anna");
  const auto ben = fixture::login_token(cl, "ben");
  c.expect(!anna.empty() && !ben.empty(), "login");

  // idempotent upload
  const auto body = fixture::upload_body(fixture::upload("acc-1", "signal lost in the field")).dump();
  for (int i = 0; i < 3; ++i) {
    auto res = cl.Post("/v1/recordings", bearer(anna), body, "application/json");
    c.expect(res && res->status == (i == 0 ? 201 : 200), "upload status");
  }
  auto listed = cl.Get("/v1/recordings", bearer(anna));
  c.expect(json::parse(listed->body)["recordings"].size() == 1, "single stored recording");

  // report byte stability
  for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) {
    for (auto s : {NoiseSetting::Office, NoiseSetting::Field}) {
      cl.Post("/v1/recordings", bearer(anna), fixture::upload_body(fixture::baseline_upload(p, s)).dump(),
              "application/json");
    }
  }
  auto first = fixture::get_settled(cl, "/v1/reports/study?format=csv", anna);
  auto second = cl.Get("/v1/reports/study?format=csv", bearer(anna));
  c.expect(first && first->status == 200, "report available");
  c.expect(first->body == second->body, "report bytes stable");
  c.expect(first->body == fixture::read_text(std::string(FV_GOLDEN) + "/report.csv"), "report matches golden CSV");

  // cascade deletion
  auto t = fixture::get_settled(cl, "/v1/recordings/acc-1/transcript", anna);
  c.expect(t && t->status == 200, "transcript ready");
  cl.Post("/v1/submissions", bearer(anna), R"({"recording_id":"acc-1","choice":"transcript"})", "application/json");
  c.expect(cl.Delete("/v1/data?recording=acc-1", bearer(ben))->status == 403, "foreign delete forbidden");
  c.expect(cl.Delete("/v1/data?recording=acc-1", bearer(anna))->status == 200, "delete");
  c.expect(server.service().store().references_to("acc-1") == 0, "artifacts left after delete");
  c.expect(cl.Delete("/v1/data?scope=all", bearer(anna))->status == 200, "delete all");
  c.expect(json::parse(cl.Get("/v1/recordings", bearer(anna))->body)["recordings"].empty(), "list empty after delete");
  c.expect(server.service().store().references_to("study-P1-office") == 0, "run artifacts left");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"Levenshtein oracle equivalence", levenshtein_oracle},
      {"WER exactness", wer_exactness},
      {"t-test oracle", t_test_oracle},
      {"Report pipeline golden", report_pipeline},
      {"Classifier fixtures", classifier_fixtures},
      {"Preprocessing determinism", preprocessing},
      {"Service contract", service_contract},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failed += c.failed();
    std::cout << (c.failed() ? "FAIL " : "PASS ") << name;
    if (c.failed()) std::cout << " (" << c.summary() << ")";
    std::cout << "\n";
  }
  return failed == 0 ? 0 : 1;
}
