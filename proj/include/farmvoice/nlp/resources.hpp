#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "farmvoice/core/domain.hpp"

namespace fv::nlp {

struct LanguageResources {
  std::set<std::string, std::less<>> stopwords;
  std::map<std::string, double, std::less<>> valence;  // each in [-1, 1]
};

/// Stopword lists and valence lexicons for every supported language.
class Resources {
 public:
  /// The lists bundled into the binary from data/.
  static const Resources& builtin();

  /// Reads <dir>/stopwords/{en,de}.txt and <dir>/lexicon/{en,de}.tsv.
  /// Throws Error{IoError} for a missing file, Error{ParseError} for a
  /// malformed lexicon line or a valence outside [-1, 1].
  static Resources load(const std::filesystem::path& dir);

  static Resources from_text(std::string_view en_stopwords, std::string_view en_lexicon,
                             std::string_view de_stopwords, std::string_view de_lexicon);

  const LanguageResources& of(Language language) const noexcept;
  bool is_stopword(Language language, std::string_view term) const;

 private:
  LanguageResources en_;
  LanguageResources de_;
};

/// One entry per non-blank line; '#' starts a comment line; surrounding
/// whitespace trimmed.
std::vector<std::string> parse_term_list(std::string_view content);

/// "term<TAB>signed decimal" per line.
std::map<std::string, double, std::less<>> parse_valence_lexicon(std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace fv::nlp
