#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/nlp/resources.hpp"

namespace fv::nlp {

/// Top-k non-stopword terms by frequency; equal counts in lexicographic
/// order. Tokens without any letter (numbers, stray symbols) are skipped.
std::vector<std::string> extract_keywords(std::string_view text, Language language, std::size_t k,
                                          const Resources& resources = Resources::builtin());

/// Sentences end at '.', '!' or '?' followed by whitespace or end of text.
std::vector<std::string> split_sentences(std::string_view text);

/// Extractive summary: sentences scored by the summed document frequency of
/// their non-stopword terms divided by the sentence's token count; the best
/// `max_sentences` are returned in their original order, joined by a space.
/// Equal scores favour the earlier sentence.
std::string summarize(std::string_view text, std::size_t max_sentences, Language language,
                      const Resources& resources = Resources::builtin());

enum class SentimentLabel { Positive, Negative, Neutral };
std::string_view to_string(SentimentLabel label) noexcept;

inline constexpr double kSentimentThreshold = 0.1;

struct Sentiment {
  SentimentLabel label = SentimentLabel::Neutral;
  double score = 0.0;  // mean valence of matched terms, 0 without matches
  std::size_t matched_terms = 0;
};

Sentiment text_sentiment(std::string_view text, Language language,
                         const Resources& resources = Resources::builtin(),
                         double threshold = kSentimentThreshold);

}  // namespace fv::nlp
