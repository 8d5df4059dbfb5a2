#include "farmvoice/reviews/classifier.hpp"

#include "farmvoice/core/embedded_data.hpp"
#include "farmvoice/metrics/text.hpp"
#include "farmvoice/nlp/resources.hpp"

namespace fv::reviews {

namespace {

std::size_t slot(ReviewClass c) noexcept {
  switch (c) {
    case ReviewClass::System: return 0;
    case ReviewClass::Operations: return 1;
    case ReviewClass::CustomerSupport: return 2;
  }
  return 0;
}

std::vector<Cue> parse_cues(std::string_view content) {
  std::vector<Cue> cues;
  for (const auto& line : nlp::parse_term_list(content)) {
    auto tokens = metrics::normalize(line);
    if (!tokens.empty()) cues.push_back(std::move(tokens));
  }
  return cues;
}

bool word_matches(const std::string& token, const std::string& cue) {
  if (token == cue) return true;
  if (token.size() == cue.size() + 1) return token.starts_with(cue) && token.back() == 's';
  if (token.size() == cue.size() + 2) return token.starts_with(cue) && token.ends_with("es");
  return false;
}

bool contains_cue(const std::vector<std::string>& tokens, const Cue& cue) {
  if (cue.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + cue.size() <= tokens.size(); ++start) {
    bool all = true;
    for (std::size_t k = 0; k < cue.size() && all; ++k) all = word_matches(tokens[start + k], cue[k]);
    if (all) return true;
  }
  return false;
}

}  // namespace

const CueLexicon& CueLexicon::builtin() {
  static const CueLexicon instance = from_text(data::embedded_file("cues/system.txt"),
                                               data::embedded_file("cues/operations.txt"),
                                               data::embedded_file("cues/customer_support.txt"));
  return instance;
}

CueLexicon CueLexicon::load(const std::filesystem::path& dir) {
  return from_text(nlp::read_file(dir / "system.txt"), nlp::read_file(dir / "operations.txt"),
                   nlp::read_file(dir / "customer_support.txt"));
}

CueLexicon CueLexicon::from_text(std::string_view system, std::string_view operations,
                                 std::string_view customer_support) {
  CueLexicon lex;
  lex.cues_[slot(ReviewClass::System)] = parse_cues(system);
  lex.cues_[slot(ReviewClass::Operations)] = parse_cues(operations);
  lex.cues_[slot(ReviewClass::CustomerSupport)] = parse_cues(customer_support);
  return lex;
}

const std::vector<Cue>& CueLexicon::cues(ReviewClass c) const noexcept { return cues_[slot(c)]; }

Labels classify(const ReviewDocument& review, const CueLexicon& lexicon) {
  const auto tokens = metrics::normalize(review.text);
  Labels labels;
  for (auto c : {ReviewClass::System, ReviewClass::Operations, ReviewClass::CustomerSupport}) {
    for (const auto& cue : lexicon.cues(c)) {
      if (contains_cue(tokens, cue)) {
        labels.add(c);
        break;
      }
    }
  }
  return labels;
}

std::vector<ReviewDocument> classify_all(std::vector<ReviewDocument> documents,
                                         const CueLexicon& lexicon) {
  for (auto& d : documents) d.labels = classify(d, lexicon);
  return documents;
}

}  // namespace fv::reviews
