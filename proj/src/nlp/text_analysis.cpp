#include "farmvoice/nlp/text_analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/text.hpp"

namespace fv::nlp {

namespace {

bool has_letter(std::string_view token) {
  for (char32_t c : utf8::decode(token)) {
    if (utf8::is_letter_or_digit(c) && !(c >= '0' && c <= '9')) return true;
  }
  return false;
}

bool is_term(std::string_view token, Language language, const Resources& resources) {
  return has_letter(token) && !resources.is_stopword(language, token);
}

bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<std::string> extract_keywords(std::string_view text, Language language, std::size_t k,
                                          const Resources& resources) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "keyword count must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (auto& token : metrics::normalize(text)) {
    if (is_term(token, language, resources)) ++counts[std::move(token)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is ordered by term, so a stable sort keeps ties lexicographic.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].first);
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  const std::u32string s = utf8::decode(text);
  std::vector<std::string> sentences;
  auto push = [&](std::size_t begin, std::size_t end) {
    while (begin < end && utf8::is_whitespace(s[begin])) ++begin;
    while (end > begin && utf8::is_whitespace(s[end - 1])) --end;
    if (begin < end) sentences.push_back(utf8::encode(std::u32string_view(s).substr(begin, end - begin)));
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_terminator(s[i])) continue;
    std::size_t end = i + 1;
    while (end < s.size() && is_terminator(s[end])) ++end;
    if (end == s.size() || utf8::is_whitespace(s[end])) {
      push(start, end);
      start = end;
    }
    i = end - 1;
  }
  push(start, s.size());
  return sentences;
}

std::string summarize(std::string_view text, std::size_t max_sentences, Language language,
                      const Resources& resources) {
  if (max_sentences == 0) throw Error(ErrorCode::InvalidArgument, "max_sentences must be at least 1");
  const auto sentences = split_sentences(text);
  if (sentences.size() <= max_sentences) return std::string(text);

  std::map<std::string, std::size_t> frequency;
  std::vector<std::vector<std::string>> tokens;
  for (const auto& sentence : sentences) {
    tokens.push_back(metrics::normalize(sentence));
    for (const auto& t : tokens.back()) {
      if (is_term(t, language, resources)) ++frequency[t];
    }
  }
  std::vector<double> score(sentences.size(), 0.0);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (tokens[i].empty()) continue;
    std::size_t sum = 0;
    for (const auto& t : tokens[i]) {
      if (auto it = frequency.find(t); it != frequency.end()) sum += it->second;
    }
    score[i] = static_cast<double>(sum) / static_cast<double>(tokens[i].size());
  }
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(max_sentences);
  std::sort(order.begin(), order.end());

  std::string out;
  for (std::size_t i : order) {
    if (!out.empty()) out += ' ';
    out += sentences[i];
  }
  return out;
}

std::string_view to_string(SentimentLabel label) noexcept {
  switch (label) {
    case SentimentLabel::Positive: return "positive";
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::Neutral: return "neutral";
  }
  return "";
}

Sentiment text_sentiment(std::string_view text, Language language, const Resources& resources,
                         double threshold) {
  const auto& lexicon = resources.of(language).valence;
  Sentiment s;
  double sum = 0.0;
  for (const auto& token : metrics::normalize(text)) {
    if (auto it = lexicon.find(token); it != lexicon.end()) {
      sum += it->second;
      ++s.matched_terms;
    }
  }
  if (s.matched_terms > 0) s.score = sum / static_cast<double>(s.matched_terms);
  s.score = std::clamp(s.score, -1.0, 1.0);
  if (s.score > threshold) {
    s.label = SentimentLabel::Positive;
  } else if (s.score < -threshold) {
    s.label = SentimentLabel::Negative;
  }
  return s;
}

}  // namespace fv::nlp
