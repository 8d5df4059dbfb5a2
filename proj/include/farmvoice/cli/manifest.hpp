#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "farmvoice/metrics/report.hpp"

namespace fv::cli {

/// Evaluation run description, read from JSON:
///
///   {"baseline": "baseline.txt",            // or "baseline_text": "..."
///    "seed": 7, "alpha": 0.10,
///    "normalization": {"fold_case": true, "strip_punctuation": true},
///    "recordings": [{"participant": "P1", "setting": "office",
///                    "transcript": "p1_office.txt"},  // or "text": "..."
///                   ...]}
///
/// Relative paths resolve against the manifest's directory.
struct RunManifest {
  std::optional<std::string> baseline_text;
  std::uint64_t seed = 0;
  double alpha = metrics::kDefaultAlpha;
  metrics::NormalizationPolicy policy;
  std::vector<metrics::TranscriptEntry> entries;

  metrics::ReportInput report_input() const;
};

/// Throws Error{ParseError} for malformed manifests and Error{IoError}
/// for unreadable files.
RunManifest load_manifest(const std::filesystem::path& path);
RunManifest parse_manifest(std::string_view json, const std::filesystem::path& base_dir);

}  // namespace fv::cli
