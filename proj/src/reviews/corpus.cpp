#include "farmvoice/reviews/corpus.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "farmvoice/core/error.hpp"
#include "farmvoice/util/csv.hpp"

namespace fv::reviews {

std::string_view to_string(ReviewClass c) noexcept {
  switch (c) {
    case ReviewClass::System: return "System";
    case ReviewClass::Operations: return "Operations";
    case ReviewClass::CustomerSupport: return "CustomerSupport";
  }
  return "";
}

std::vector<std::string> Labels::names() const {
  if (is_none()) return {"None"};
  std::vector<std::string> out;
  for (auto c : {ReviewClass::System, ReviewClass::Operations, ReviewClass::CustomerSupport}) {
    if (has(c)) out.emplace_back(to_string(c));
  }
  return out;
}

std::optional<Labels> Labels::from_names(const std::vector<std::string>& names) {
  if (names.size() == 1 && names.front() == "None") return Labels{};
  if (names.empty()) return std::nullopt;
  Labels out;
  for (const auto& n : names) {
    bool known = false;
    for (auto c : {ReviewClass::System, ReviewClass::Operations, ReviewClass::CustomerSupport}) {
      if (to_string(c) == n) {
        out.add(c);
        known = true;
      }
    }
    if (!known) return std::nullopt;
  }
  return out;
}

CorpusReadResult read_corpus_csv(std::istream& in) {
  CorpusReadResult result;
  util::CsvReader reader(in);
  auto header = reader.next();
  if (!header) return result;
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header->size(); ++i) column[(*header)[i]] = i;
  for (const char* required : {"id", "app", "source", "text"}) {
    if (!column.contains(required)) {
      throw Error(ErrorCode::ParseError, std::string("corpus CSV header lacks column '") + required + "'");
    }
  }
  for (;;) {
    std::optional<std::vector<std::string>> row;
    try {
      row = reader.next();
    } catch (const Error& e) {
      result.errors.push_back({reader.line(), e.what()});
      break;
    }
    if (!row) break;
    if (row->size() != header->size()) {
      result.errors.push_back({reader.line(), "expected " + std::to_string(header->size()) +
                                                  " fields, found " + std::to_string(row->size())});
      continue;
    }
    ReviewDocument doc;
    doc.id = (*row)[column["id"]];
    doc.app = (*row)[column["app"]];
    doc.source = (*row)[column["source"]];
    doc.text = (*row)[column["text"]];
    if (doc.id.empty()) {
      result.errors.push_back({reader.line(), "empty id"});
      continue;
    }
    result.documents.push_back(std::move(doc));
  }
  return result;
}

CorpusReadResult read_corpus_jsonl(std::istream& in) {
  CorpusReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ReviewDocument doc;
      doc.id = j.at("id").get<std::string>();
      doc.app = j.at("app").get<std::string>();
      doc.source = j.value("source", "");
      doc.text = j.at("text").get<std::string>();
      if (doc.id.empty()) throw Error(ErrorCode::ParseError, "empty id");
      result.documents.push_back(std::move(doc));
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

CorpusReadResult read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open corpus " + path.string());
  return path.extension() == ".csv" ? read_corpus_csv(in) : read_corpus_jsonl(in);
}

void write_labeled_jsonl(std::ostream& out, const std::vector<ReviewDocument>& documents) {
  for (const auto& d : documents) {
    nlohmann::json j = {{"id", d.id}, {"app", d.app}, {"source", d.source}, {"text", d.text}};
    j["labels"] = d.labels ? nlohmann::json(d.labels->names()) : nlohmann::json(nullptr);
    out << j.dump() << '\n';
  }
}

namespace {

std::size_t parse_count(const std::string& s, std::size_t line, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::ParseError, "manifest line " + std::to_string(line) + ": bad " + what +
                                           " '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<ManifestEntry> read_manifest_csv(std::istream& in) {
  util::CsvReader reader(in);
  auto header = reader.next();
  if (!header) return {};
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header->size(); ++i) column[(*header)[i]] = i;
  for (const char* required : {"app", "reviews", "category"}) {
    if (!column.contains(required)) {
      throw Error(ErrorCode::ParseError, std::string("manifest header lacks column '") + required + "'");
    }
  }
  std::vector<ManifestEntry> out;
  std::set<std::string> names;
  while (auto row = reader.next()) {
    if (row->size() != header->size()) {
      throw Error(ErrorCode::ParseError, "manifest line " + std::to_string(reader.line()) +
                                             ": wrong field count");
    }
    ManifestEntry e;
    e.app = (*row)[column["app"]];
    e.reviews = parse_count((*row)[column["reviews"]], reader.line(), "review count");
    if (column.contains("sample")) e.sample = parse_count((*row)[column["sample"]], reader.line(), "sample");
    e.category = (*row)[column["category"]];
    if (!names.insert(e.app).second) {
      throw Error(ErrorCode::ParseError, "manifest repeats app '" + e.app + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace fv::reviews
