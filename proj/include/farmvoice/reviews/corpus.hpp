#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fv::reviews {

enum class ReviewClass : std::uint8_t { System = 1, Operations = 2, CustomerSupport = 4 };

std::string_view to_string(ReviewClass c) noexcept;

/// Multi-label classification result. The empty set is the "None" label,
/// so None can never coexist with one of the three classes.
class Labels {
 public:
  constexpr Labels() = default;
  constexpr Labels(std::initializer_list<ReviewClass> classes) {
    for (auto c : classes) add(c);
  }

  constexpr void add(ReviewClass c) noexcept { bits_ |= static_cast<std::uint8_t>(c); }
  constexpr bool has(ReviewClass c) const noexcept { return bits_ & static_cast<std::uint8_t>(c); }
  constexpr bool is_none() const noexcept { return bits_ == 0; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  /// {"System", ...} or {"None"}.
  std::vector<std::string> names() const;
  static std::optional<Labels> from_names(const std::vector<std::string>& names);

  friend constexpr bool operator==(Labels, Labels) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct ReviewDocument {
  std::string id;
  std::string app;
  std::string source;
  std::string text;
  std::optional<Labels> labels;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct CorpusReadResult {
  std::vector<ReviewDocument> documents;
  std::vector<RowError> errors;  // malformed rows, skipped
};

/// CSV with a header naming at least id, app, source, text (any order).
CorpusReadResult read_corpus_csv(std::istream& in);
/// One JSON object per line with string fields id, app, source, text.
CorpusReadResult read_corpus_jsonl(std::istream& in);
/// Dispatches on extension: .csv, otherwise JSON lines.
CorpusReadResult read_corpus(const std::filesystem::path& path);

/// JSON lines: {"app","id","labels","source","text"} per document.
void write_labeled_jsonl(std::ostream& out, const std::vector<ReviewDocument>& documents);

struct ManifestEntry {
  std::string app;
  std::size_t reviews = 0;
  std::optional<std::size_t> sample;
  std::string category;
};

/// CSV with columns app, reviews, [sample,] category. Throws
/// Error{ParseError} on negative/non-numeric counts or repeated app names.
std::vector<ManifestEntry> read_manifest_csv(std::istream& in);

}  // namespace fv::reviews
