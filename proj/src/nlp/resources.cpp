#include "farmvoice/nlp/resources.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "farmvoice/core/embedded_data.hpp"
#include "farmvoice/core/error.hpp"

namespace fv::nlp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    const std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    fn(t, line_no);
  }
}

LanguageResources make(std::string_view stopwords, std::string_view lexicon) {
  LanguageResources r;
  for (auto& w : parse_term_list(stopwords)) r.stopwords.insert(std::move(w));
  r.valence = parse_valence_lexicon(lexicon);
  return r;
}

}  // namespace

std::vector<std::string> parse_term_list(std::string_view content) {
  std::vector<std::string> terms;
  for_each_line(content, [&](std::string_view line, std::size_t) { terms.emplace_back(line); });
  return terms;
}

std::map<std::string, double, std::less<>> parse_valence_lexicon(std::string_view content) {
  std::map<std::string, double, std::less<>> out;
  for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    const auto tab = line.find('\t');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::ParseError,
                  "lexicon line " + std::to_string(line_no) + ": " + why);
    };
    if (tab == std::string_view::npos) fail("expected term<TAB>valence");
    const std::string_view term = trim(line.substr(0, tab));
    const std::string_view number = trim(line.substr(tab + 1));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc{} || ptr != number.data() + number.size()) fail("bad valence");
    if (value < -1.0 || value > 1.0) fail("valence outside [-1, 1]");
    if (term.empty()) fail("empty term");
    out[std::string(term)] = value;
  });
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const Resources& Resources::builtin() {
  static const Resources instance = from_text(
      data::embedded_file("stopwords/en.txt"), data::embedded_file("lexicon/en.tsv"),
      data::embedded_file("stopwords/de.txt"), data::embedded_file("lexicon/de.tsv"));
  return instance;
}

Resources Resources::load(const std::filesystem::path& dir) {
  return from_text(read_file(dir / "stopwords" / "en.txt"), read_file(dir / "lexicon" / "en.tsv"),
                   read_file(dir / "stopwords" / "de.txt"), read_file(dir / "lexicon" / "de.tsv"));
}

Resources Resources::from_text(std::string_view en_stopwords, std::string_view en_lexicon,
                               std::string_view de_stopwords, std::string_view de_lexicon) {
  Resources r;
  r.en_ = make(en_stopwords, en_lexicon);
  r.de_ = make(de_stopwords, de_lexicon);
  return r;
}

const LanguageResources& Resources::of(Language language) const noexcept {
  return language == Language::De ? de_ : en_;
}

bool Resources::is_stopword(Language language, std::string_view term) const {
  return of(language).stopwords.contains(term);
}

}  // namespace fv::nlp
