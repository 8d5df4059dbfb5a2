#include "farmvoice/reviews/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "farmvoice/core/embedded_data.hpp"
#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/text.hpp"

namespace fv::reviews {

std::vector<VocabularyCategory> parse_categories(std::string_view tsv) {
  std::vector<VocabularyCategory> out;
  for (const auto& line : nlp::parse_term_list(tsv)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::ParseError, "category line lacks a tab: " + line);
    }
    VocabularyCategory cat;
    cat.name = line.substr(0, tab);
    std::string_view rest = std::string_view(line).substr(tab + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string term(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      term.erase(0, term.find_first_not_of(' '));
      term.erase(term.find_last_not_of(' ') + 1);
      if (term.empty()) continue;
      if (utf8::to_lower(term) != term) {
        throw Error(ErrorCode::ParseError, "seed term is not lowercase: " + term);
      }
      cat.seed_terms.push_back(std::move(term));
    }
    out.push_back(std::move(cat));
  }
  if (out.size() != kVocabularyCategoryCount) {
    throw Error(ErrorCode::ParseError, "expected 8 vocabulary categories, found " +
                                           std::to_string(out.size()));
  }
  return out;
}

const std::vector<VocabularyCategory>& builtin_categories() {
  static const auto categories = parse_categories(data::embedded_file("vocabulary/categories.tsv"));
  return categories;
}

namespace {

std::size_t count_phrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

std::vector<TermCount> ranked(const std::map<std::string, std::size_t>& counts) {
  std::vector<TermCount> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace

std::vector<CategoryHits> vocabulary_scan(std::span<const ReviewDocument> corpus,
                                          const std::vector<VocabularyCategory>& categories,
                                          Language language, const nlp::Resources& resources) {
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(corpus.size());
  for (const auto& d : corpus) tokenized.push_back(metrics::normalize(d.text));

  std::vector<CategoryHits> table;
  for (const auto& cat : categories) {
    std::vector<std::vector<std::string>> seeds;
    std::set<std::string> seed_words;
    for (const auto& term : cat.seed_terms) {
      seeds.push_back(metrics::normalize(term));
      for (const auto& w : seeds.back()) seed_words.insert(w);
    }
    std::map<std::string, std::size_t> hits;
    std::map<std::string, std::size_t> co;
    for (const auto& tokens : tokenized) {
      bool matched = false;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (seeds[s].empty()) continue;
        if (const std::size_t n = count_phrase(tokens, seeds[s])) {
          hits[cat.seed_terms[s]] += n;
          matched = true;
        }
      }
      if (!matched) continue;
      for (const auto& t : tokens) {
        if (seed_words.contains(t) || resources.is_stopword(language, t)) continue;
        bool letter = false;
        for (char32_t c : utf8::decode(t)) letter |= utf8::is_letter_or_digit(c) && !(c >= '0' && c <= '9');
        if (letter) ++co[t];
      }
    }
    if (hits.empty()) continue;
    table.push_back({cat.name, ranked(hits), ranked(co)});
  }
  return table;
}

}  // namespace fv::reviews
