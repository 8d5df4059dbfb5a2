#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/metrics/statistics.hpp"
#include "farmvoice/metrics/text.hpp"
#include "farmvoice/metrics/wer.hpp"

namespace fv::metrics {

enum class Metric {
  WordErrorRate,
  Levenshtein,
  TargetBytes,
  ByteDifference,
  TargetCharacters,
  CharacterDifference,
};

inline constexpr std::array kAllMetrics = {
    Metric::WordErrorRate,  Metric::Levenshtein,      Metric::TargetBytes,
    Metric::ByteDifference, Metric::TargetCharacters, Metric::CharacterDifference,
};

/// The metrics compared across settings, with the direction in which the
/// field setting is hypothesized to be worse.
struct ComparedMetric {
  Metric metric;
  Orientation orientation;
};

inline constexpr std::array kComparedMetrics = {
    ComparedMetric{Metric::WordErrorRate, Orientation::HigherIsWorse},
    ComparedMetric{Metric::Levenshtein, Orientation::HigherIsWorse},
    ComparedMetric{Metric::TargetBytes, Orientation::LowerIsWorse},
    ComparedMetric{Metric::TargetCharacters, Orientation::LowerIsWorse},
};

std::string_view metric_key(Metric m) noexcept;    // e.g. "wer"
std::string_view metric_label(Metric m) noexcept;  // e.g. "Word Error Rate"

struct TranscriptEntry {
  std::string participant;
  NoiseSetting setting = NoiseSetting::Office;
  std::string text;
};

struct ReportInput {
  std::optional<BaselineText> baseline;
  NormalizationPolicy policy;
  double alpha = kDefaultAlpha;
  std::vector<TranscriptEntry> entries;
};

struct RecordingMetrics {
  std::string participant;
  NoiseSetting setting = NoiseSetting::Office;
  TokenAlignment alignment;
  double wer = 0.0;
  std::size_t levenshtein = 0;
  LengthMetrics lengths;

  double value(Metric m) const noexcept;
};

struct SettingAggregate {
  NoiseSetting setting = NoiseSetting::Office;
  std::size_t n = 0;
  std::array<Aggregate, kAllMetrics.size()> metrics{};  // indexed like kAllMetrics

  const Aggregate& of(Metric m) const noexcept;
};

struct BaselineSummary {
  std::size_t source_bytes = 0;
  std::size_t source_characters = 0;
  std::size_t reference_words = 0;
};

struct EvaluationReport {
  BaselineSummary baseline;
  NormalizationPolicy policy;
  double alpha = kDefaultAlpha;
  std::vector<RecordingMetrics> rows;           // sorted by (participant, setting)
  std::vector<SettingAggregate> aggregates;     // office first, settings without rows omitted
  std::vector<SignificanceResult> comparisons;  // kComparedMetrics order; empty if < 2 pairs
  std::vector<std::string> warnings;
};

/// Computes per-recording metrics against the baseline, per-setting
/// aggregates and the paired one-tailed comparisons.
///
/// Throws Error{MissingBaseline} without a baseline and
/// Error{ValidationError} when a (participant, setting) pair repeats.
/// Participants lacking one of the two settings are excluded from the
/// comparisons and named in the warnings.
EvaluationReport build_report(const ReportInput& input);

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view json);

/// One row per (participant, setting) under a fixed header.
std::string to_csv(const EvaluationReport& report);

inline constexpr std::string_view kCsvHeader =
    "participant,setting,wer,levenshtein,target_bytes,byte_difference,target_characters,"
    "character_difference";

/// Plain-text summary laid out as metric rows with office, field and
/// comparison columns.
std::string render_summary_table(const EvaluationReport& report);

}  // namespace fv::metrics
