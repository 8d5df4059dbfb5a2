#include "farmvoice/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "farmvoice/core/error.hpp"

namespace fv::metrics {

using nlohmann::json;

std::string_view metric_key(Metric m) noexcept {
  switch (m) {
    case Metric::WordErrorRate: return "wer";
    case Metric::Levenshtein: return "levenshtein";
    case Metric::TargetBytes: return "target_bytes";
    case Metric::ByteDifference: return "byte_difference";
    case Metric::TargetCharacters: return "target_characters";
    case Metric::CharacterDifference: return "character_difference";
  }
  return "";
}

std::string_view metric_label(Metric m) noexcept {
  switch (m) {
    case Metric::WordErrorRate: return "Word Error Rate";
    case Metric::Levenshtein: return "Levenshtein Distance";
    case Metric::TargetBytes: return "Target Bytes";
    case Metric::ByteDifference: return "Byte Difference";
    case Metric::TargetCharacters: return "Target Characters";
    case Metric::CharacterDifference: return "Character Difference";
  }
  return "";
}

namespace {

std::size_t metric_index(Metric m) noexcept { return static_cast<std::size_t>(m); }

std::optional<Metric> metric_from_key(std::string_view key) {
  for (Metric m : kAllMetrics) {
    if (metric_key(m) == key) return m;
  }
  return std::nullopt;
}

}  // namespace

double RecordingMetrics::value(Metric m) const noexcept {
  switch (m) {
    case Metric::WordErrorRate: return wer;
    case Metric::Levenshtein: return static_cast<double>(levenshtein);
    case Metric::TargetBytes: return static_cast<double>(lengths.target_bytes);
    case Metric::ByteDifference: return static_cast<double>(lengths.byte_difference);
    case Metric::TargetCharacters: return static_cast<double>(lengths.target_characters);
    case Metric::CharacterDifference: return static_cast<double>(lengths.character_difference);
  }
  return 0.0;
}

const Aggregate& SettingAggregate::of(Metric m) const noexcept { return metrics[metric_index(m)]; }

EvaluationReport build_report(const ReportInput& input) {
  if (!input.baseline) {
    throw Error(ErrorCode::MissingBaseline, "an evaluation report needs a baseline text");
  }
  const BaselineText& baseline = *input.baseline;
  const auto reference = normalize(baseline.text(), input.policy);

  EvaluationReport report;
  report.baseline = {baseline.source_bytes(), baseline.source_characters(), reference.size()};
  report.policy = input.policy;
  report.alpha = input.alpha;

  std::set<std::pair<std::string, NoiseSetting>> seen;
  for (const auto& entry : input.entries) {
    if (!seen.emplace(entry.participant, entry.setting).second) {
      throw Error(ErrorCode::ValidationError, "duplicate transcript for participant '" +
                                                  entry.participant + "' in setting " +
                                                  std::string(to_string(entry.setting)));
    }
    RecordingMetrics row;
    row.participant = entry.participant;
    row.setting = entry.setting;
    row.alignment = align(reference, normalize(entry.text, input.policy));
    row.wer = word_error_rate(row.alignment);
    row.levenshtein = levenshtein(baseline.text(), entry.text);
    row.lengths = length_metrics(entry.text, baseline);
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.participant, a.setting) < std::tie(b.participant, b.setting);
  });

  for (NoiseSetting setting : {NoiseSetting::Office, NoiseSetting::Field}) {
    std::vector<const RecordingMetrics*> members;
    for (const auto& row : report.rows) {
      if (row.setting == setting) members.push_back(&row);
    }
    if (members.empty()) continue;
    SettingAggregate agg;
    agg.setting = setting;
    agg.n = members.size();
    for (Metric m : kAllMetrics) {
      std::vector<double> values;
      for (const auto* row : members) values.push_back(row->value(m));
      agg.metrics[metric_index(m)] = aggregate(values, /*require_sd=*/false);
    }
    report.aggregates.push_back(agg);
  }

  std::map<std::string, std::pair<const RecordingMetrics*, const RecordingMetrics*>> by_participant;
  for (const auto& row : report.rows) {
    auto& slot = by_participant[row.participant];
    (row.setting == NoiseSetting::Office ? slot.first : slot.second) = &row;
  }
  std::vector<std::pair<const RecordingMetrics*, const RecordingMetrics*>> paired;
  for (const auto& [participant, slot] : by_participant) {
    if (slot.first && slot.second) {
      paired.push_back(slot);
    } else {
      report.warnings.push_back("UnpairedParticipant: " + participant + " has no " +
                                (slot.first ? "field" : "office") +
                                " recording and is excluded from comparisons");
    }
  }
  if (paired.size() < 2) {
    report.warnings.push_back("InsufficientPairs: " + std::to_string(paired.size()) +
                              " paired participant(s); comparisons need at least 2");
    return report;
  }
  for (const auto& compared : kComparedMetrics) {
    std::vector<PairedSample> samples;
    for (const auto& [office, field] : paired) {
      samples.push_back({office->value(compared.metric), field->value(compared.metric)});
    }
    SignificanceResult result = paired_t_one_tailed(samples, compared.orientation, input.alpha);
    result.metric = std::string(metric_key(compared.metric));
    report.comparisons.push_back(std::move(result));
  }
  return report;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string to_json(const EvaluationReport& report) {
  json doc;
  doc["format_version"] = 1;
  doc["alpha"] = report.alpha;
  doc["baseline"] = {{"source_bytes", report.baseline.source_bytes},
                     {"source_characters", report.baseline.source_characters},
                     {"reference_words", report.baseline.reference_words}};
  doc["normalization"] = {{"fold_case", report.policy.fold_case},
                          {"strip_punctuation", report.policy.strip_punctuation},
                          {"tokenizer", "unicode_whitespace"}};

  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"participant", r.participant},
                    {"setting", to_string(r.setting)},
                    {"wer", r.wer},
                    {"substitutions", r.alignment.substitutions},
                    {"deletions", r.alignment.deletions},
                    {"insertions", r.alignment.insertions},
                    {"reference_words", r.alignment.reference_length},
                    {"levenshtein", r.levenshtein},
                    {"target_bytes", r.lengths.target_bytes},
                    {"byte_difference", r.lengths.byte_difference},
                    {"target_characters", r.lengths.target_characters},
                    {"character_difference", r.lengths.character_difference}});
  }
  doc["rows"] = std::move(rows);

  json aggregates = json::object();
  for (const auto& agg : report.aggregates) {
    json entry = {{"n", agg.n}};
    for (Metric m : kAllMetrics) {
      const Aggregate& a = agg.of(m);
      entry[std::string(metric_key(m))] = {{"mean", a.mean}, {"sd", optional_number(a.sd)}};
    }
    aggregates[std::string(to_string(agg.setting))] = std::move(entry);
  }
  doc["aggregates"] = std::move(aggregates);

  json comparisons = json::array();
  for (const auto& c : report.comparisons) {
    comparisons.push_back({{"metric", c.metric},
                           {"orientation", to_string(c.orientation)},
                           {"n", c.n},
                           {"mean_difference", c.mean_difference},
                           {"sd_difference", c.sd_difference},
                           {"t_statistic", optional_number(c.t_statistic)},
                           {"degrees_of_freedom", c.degrees_of_freedom},
                           {"p_value", c.p_value},
                           {"alpha", c.alpha},
                           {"significant", c.significant},
                           {"zero_variance", c.zero_variance}});
  }
  doc["comparisons"] = std::move(comparisons);
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    EvaluationReport report;
    report.alpha = doc.at("alpha").get<double>();
    const auto& b = doc.at("baseline");
    report.baseline = {b.at("source_bytes").get<std::size_t>(),
                       b.at("source_characters").get<std::size_t>(),
                       b.at("reference_words").get<std::size_t>()};
    report.policy.fold_case = doc.at("normalization").at("fold_case").get<bool>();
    report.policy.strip_punctuation = doc.at("normalization").at("strip_punctuation").get<bool>();

    for (const auto& r : doc.at("rows")) {
      RecordingMetrics row;
      row.participant = r.at("participant").get<std::string>();
      auto setting = parse_setting(r.at("setting").get<std::string>());
      if (!setting) throw Error(ErrorCode::ParseError, "unknown setting in report row");
      row.setting = *setting;
      row.wer = r.at("wer").get<double>();
      row.alignment = {r.at("substitutions").get<std::size_t>(),
                       r.at("deletions").get<std::size_t>(),
                       r.at("insertions").get<std::size_t>(),
                       r.at("reference_words").get<std::size_t>()};
      row.levenshtein = r.at("levenshtein").get<std::size_t>();
      row.lengths = {r.at("target_bytes").get<std::size_t>(),
                     r.at("byte_difference").get<long long>(),
                     r.at("target_characters").get<std::size_t>(),
                     r.at("character_difference").get<long long>()};
      report.rows.push_back(std::move(row));
    }

    for (NoiseSetting setting : {NoiseSetting::Office, NoiseSetting::Field}) {
      const std::string key(to_string(setting));
      if (!doc.at("aggregates").contains(key)) continue;
      const auto& a = doc.at("aggregates").at(key);
      SettingAggregate agg;
      agg.setting = setting;
      agg.n = a.at("n").get<std::size_t>();
      for (Metric m : kAllMetrics) {
        const auto& entry = a.at(std::string(metric_key(m)));
        agg.metrics[metric_index(m)] = {agg.n, entry.at("mean").get<double>(),
                                        read_optional(entry.at("sd"))};
      }
      report.aggregates.push_back(agg);
    }

    for (const auto& c : doc.at("comparisons")) {
      SignificanceResult r;
      r.metric = c.at("metric").get<std::string>();
      if (!metric_from_key(r.metric)) throw Error(ErrorCode::ParseError, "unknown metric " + r.metric);
      r.orientation = c.at("orientation").get<std::string>() == "lower_is_worse"
                          ? Orientation::LowerIsWorse
                          : Orientation::HigherIsWorse;
      r.n = c.at("n").get<std::size_t>();
      r.mean_difference = c.at("mean_difference").get<double>();
      r.sd_difference = c.at("sd_difference").get<double>();
      r.t_statistic = read_optional(c.at("t_statistic"));
      r.degrees_of_freedom = c.at("degrees_of_freedom").get<std::size_t>();
      r.p_value = c.at("p_value").get<double>();
      r.alpha = c.at("alpha").get<double>();
      r.significant = c.at("significant").get<bool>();
      r.zero_variance = c.at("zero_variance").get<bool>();
      report.comparisons.push_back(std::move(r));
    }
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report JSON: ") + e.what());
  }
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << csv_field(r.participant) << ',' << to_string(r.setting) << ',' << fixed(r.wer, 4) << ','
        << r.levenshtein << ',' << r.lengths.target_bytes << ',' << r.lengths.byte_difference << ','
        << r.lengths.target_characters << ',' << r.lengths.character_difference << '\n';
  }
  return out.str();
}

std::string render_summary_table(const EvaluationReport& report) {
  auto find_agg = [&](NoiseSetting s) -> const SettingAggregate* {
    for (const auto& a : report.aggregates) {
      if (a.setting == s) return &a;
    }
    return nullptr;
  };
  auto find_cmp = [&](Metric m) -> const SignificanceResult* {
    for (const auto& c : report.comparisons) {
      if (c.metric == metric_key(m)) return &c;
    }
    return nullptr;
  };
  const int digits_for_ratio = 2;
  auto cell = [](const std::optional<double>& v, int digits) {
    return v ? fixed(*v, digits) : std::string();
  };

  const SettingAggregate* office = find_agg(NoiseSetting::Office);
  const SettingAggregate* field = find_agg(NoiseSetting::Field);

  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s|%10s %9s|%10s %9s|%10s %9s %8s\n", "", "Office", "",
                "Field", "", "Comparison", "", "");
  out << line;
  std::snprintf(line, sizeof line, "%-22s|%10s %9s|%10s %9s|%10s %9s %8s\n", "Metric", "Mean",
                "SD", "Mean", "SD", "Mean", "SD", "p");
  out << line;
  for (Metric m : kAllMetrics) {
    const int digits = m == Metric::WordErrorRate ? digits_for_ratio : 1;
    const auto mean_of = [&](const SettingAggregate* a) {
      return a ? std::optional<double>(a->of(m).mean) : std::nullopt;
    };
    const auto sd_of = [&](const SettingAggregate* a) {
      return a ? a->of(m).sd : std::nullopt;
    };
    std::string cmp_mean, cmp_sd, cmp_p;
    if (const auto* c = find_cmp(m)) {
      cmp_mean = fixed(c->mean_difference, 2);
      cmp_sd = fixed(c->sd_difference, 2);
      cmp_p = fixed(c->p_value, 4);
    }
    std::snprintf(line, sizeof line, "%-22s|%10s %9s|%10s %9s|%10s %9s %8s\n",
                  std::string(metric_label(m)).c_str(), cell(mean_of(office), digits).c_str(),
                  cell(sd_of(office), digits).c_str(), cell(mean_of(field), digits).c_str(),
                  cell(sd_of(field), digits).c_str(), cmp_mean.c_str(), cmp_sd.c_str(),
                  cmp_p.c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "baseline: %zu source bytes, %zu source characters\n",
                report.baseline.source_bytes, report.baseline.source_characters);
  out << line;
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace fv::metrics
