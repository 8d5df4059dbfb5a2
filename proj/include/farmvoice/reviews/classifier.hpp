#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "farmvoice/reviews/corpus.hpp"

namespace fv::reviews {

/// A cue is a word or a phrase, stored as normalized tokens.
using Cue = std::vector<std::string>;

/// Cue lists per class, loaded from cues/{system,operations,customer_support}.txt.
class CueLexicon {
 public:
  static const CueLexicon& builtin();
  static CueLexicon load(const std::filesystem::path& dir);
  static CueLexicon from_text(std::string_view system, std::string_view operations,
                              std::string_view customer_support);

  const std::vector<Cue>& cues(ReviewClass c) const noexcept;

 private:
  std::array<std::vector<Cue>, 3> cues_;
};

/// Assigns every class with at least one matching cue; None when nothing
/// matches. Words match their cue exactly or with a plural "s"/"es" suffix.
Labels classify(const ReviewDocument& review, const CueLexicon& lexicon = CueLexicon::builtin());

/// Returns copies of the documents with labels filled in.
std::vector<ReviewDocument> classify_all(std::vector<ReviewDocument> documents,
                                         const CueLexicon& lexicon = CueLexicon::builtin());

}  // namespace fv::reviews
