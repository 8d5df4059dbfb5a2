#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/nlp/resources.hpp"
#include "farmvoice/reviews/corpus.hpp"

namespace fv::reviews {

struct VocabularyCategory {
  std::string name;
  std::vector<std::string> seed_terms;  // lowercase; phrases allowed
};

inline constexpr std::size_t kVocabularyCategoryCount = 8;

/// "name<TAB>term,term,..." per line. Throws Error{ParseError} unless there
/// are exactly eight categories with lowercase seed terms.
std::vector<VocabularyCategory> parse_categories(std::string_view tsv);
const std::vector<VocabularyCategory>& builtin_categories();

using TermCount = std::pair<std::string, std::size_t>;

struct CategoryHits {
  std::string category;
  std::vector<TermCount> seed_hits;    // by count desc, then term
  std::vector<TermCount> co_occurring; // non-stopword, non-seed terms of matching reviews
};

/// Categories without any seed hit are left out of the table.
std::vector<CategoryHits> vocabulary_scan(std::span<const ReviewDocument> corpus,
                                          const std::vector<VocabularyCategory>& categories =
                                              builtin_categories(),
                                          Language language = Language::En,
                                          const nlp::Resources& resources = nlp::Resources::builtin());

}  // namespace fv::reviews
