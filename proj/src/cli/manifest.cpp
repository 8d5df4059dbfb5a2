#include "farmvoice/cli/manifest.hpp"

#include <json.hpp>

#include "farmvoice/core/error.hpp"
#include "farmvoice/nlp/resources.hpp"

namespace fv::cli {

using nlohmann::json;

metrics::ReportInput RunManifest::report_input() const {
  metrics::ReportInput in;
  if (baseline_text) in.baseline.emplace(*baseline_text);
  in.policy = policy;
  in.alpha = alpha;
  in.entries = entries;
  return in;
}

RunManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() ? base_dir / path : path;
  };
  RunManifest m;
  try {
    const json doc = json::parse(text);
    if (doc.contains("baseline")) {
      m.baseline_text = nlp::read_file(resolve(doc.at("baseline").get<std::string>()));
    } else if (doc.contains("baseline_text")) {
      m.baseline_text = doc.at("baseline_text").get<std::string>();
    }
    m.seed = doc.value("seed", std::uint64_t{0});
    m.alpha = doc.value("alpha", metrics::kDefaultAlpha);
    if (!(m.alpha > 0.0 && m.alpha < 1.0)) throw Error(ErrorCode::ParseError, "manifest: alpha must be in (0, 1)");
    if (doc.contains("normalization")) {
      const auto& n = doc.at("normalization");
      m.policy.fold_case = n.value("fold_case", true);
      m.policy.strip_punctuation = n.value("strip_punctuation", true);
    }
    for (const auto& r : doc.at("recordings")) {
      metrics::TranscriptEntry e;
      e.participant = r.at("participant").get<std::string>();
      const auto setting = parse_setting(r.at("setting").get<std::string>());
      if (!setting) throw Error(ErrorCode::ParseError, "manifest: setting must be office or field");
      e.setting = *setting;
      if (r.contains("transcript")) {
        e.text = nlp::read_file(resolve(r.at("transcript").get<std::string>()));
      } else {
        e.text = r.at("text").get<std::string>();
      }
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(nlp::read_file(path), path.parent_path());
}

}  // namespace fv::cli
