#include "farmvoice/stt/inject.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/wer.hpp"

namespace fv::stt {

namespace {

constexpr int kMaxAttempts = 256;

std::vector<std::string> split_raw(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t c : utf8::decode(text)) {
    if (utf8::is_whitespace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      utf8::append(current, c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t draw(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

enum class Edit { Keep, Substitute, Delete };

}  // namespace

std::string inject_errors(std::string_view reference, const ErrorInjectionSpec& spec,
                          const metrics::NormalizationPolicy& policy) {
  if (spec.substitutions == 0 && spec.deletions == 0 && spec.insertions == 0) {
    return std::string(reference);
  }

  const std::vector<std::string> raw = split_raw(reference);
  // Raw tokens that survive normalization are the words being counted.
  std::vector<std::size_t> word_at;
  std::set<std::string> vocabulary;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    auto normalized = metrics::normalize(raw[t], policy);
    if (normalized.empty()) continue;
    word_at.push_back(t);
    vocabulary.insert(normalized.front());
  }
  const std::size_t n = word_at.size();
  if (spec.substitutions + spec.deletions > n) {
    throw Error(ErrorCode::SpecInfeasible,
                "cannot substitute/delete " +
                    std::to_string(spec.substitutions + spec.deletions) + " of " +
                    std::to_string(n) + " words");
  }

  std::size_t next_label = 1;
  auto fresh_token = [&] {
    for (;;) {
      std::string token = "zq" + std::to_string(next_label++);
      if (!vocabulary.contains(token)) return token;
    }
  };

  const auto reference_tokens = metrics::normalize(reference, policy);
  const metrics::TokenAlignment wanted{spec.substitutions, spec.deletions, spec.insertions, n};

  const bool mixed = spec.deletions > 0 && spec.insertions > 0;
  const std::size_t kept = n - spec.substitutions - spec.deletions;
  // Pairing deletions with insertions as substitutions across a run of B kept
  // words costs B + max(d, i) against d + i, so the run needs B > min(d, i).
  const std::size_t barrier = std::min(spec.deletions, spec.insertions) + 1;
  if (mixed && kept < barrier) {
    throw Error(ErrorCode::SpecInfeasible,
                "deletions and insertions need " + std::to_string(barrier) +
                    " untouched words between them, only " + std::to_string(kept) + " remain");
  }

  std::mt19937_64 rng(spec.seed);
  auto shuffle = [&](std::vector<Edit>& v) {
    for (std::size_t k = 0; k + 1 < v.size(); ++k) std::swap(v[k], v[k + draw(rng, v.size() - k)]);
  };
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Edit> edit;
    std::vector<std::size_t> slots;
    if (!mixed) {
      edit.assign(spec.substitutions, Edit::Substitute);
      edit.resize(spec.substitutions + spec.deletions, Edit::Delete);
      edit.resize(n, Edit::Keep);
      shuffle(edit);
      // Slot j inserts before word j (slot n appends).
      for (std::size_t j = 0; j <= n; ++j) slots.push_back(j);
    } else {
      // Deletions on one side of the kept-word barrier, insertions on the other.
      const std::size_t subs_near = draw(rng, spec.substitutions + 1);
      const std::size_t keep_near = draw(rng, kept - barrier + 1);
      std::vector<Edit> near(spec.deletions, Edit::Delete);
      near.resize(spec.deletions + subs_near, Edit::Substitute);
      near.resize(spec.deletions + subs_near + keep_near, Edit::Keep);
      std::vector<Edit> far(spec.substitutions - subs_near, Edit::Substitute);
      far.resize(spec.substitutions - subs_near + (kept - barrier - keep_near), Edit::Keep);
      shuffle(near);
      shuffle(far);
      const bool deletions_first = rng() % 2 == 0;
      if (deletions_first) {
        edit = near;
        edit.resize(edit.size() + barrier, Edit::Keep);
        for (std::size_t j = edit.size(); j <= n; ++j) slots.push_back(j);
        edit.insert(edit.end(), far.begin(), far.end());
      } else {
        edit = far;
        for (std::size_t j = 0; j <= edit.size(); ++j) slots.push_back(j);
        edit.resize(edit.size() + barrier, Edit::Keep);
        edit.insert(edit.end(), near.begin(), near.end());
      }
    }
    std::vector<std::size_t> inserts_at(n + 1, 0);
    for (std::size_t k = 0; k < spec.insertions; ++k) ++inserts_at[slots[draw(rng, slots.size())]];

    next_label = 1;
    std::vector<std::string> out;
    std::size_t word = 0;
    auto emit_insertions = [&](std::size_t slot) {
      for (std::size_t k = 0; k < inserts_at[slot]; ++k) out.push_back(fresh_token());
    };
    for (std::size_t t = 0; t < raw.size(); ++t) {
      if (word < n && word_at[word] == t) {
        emit_insertions(word);
        if (edit[word] == Edit::Substitute) {
          out.push_back(fresh_token());
        } else if (edit[word] == Edit::Keep) {
          out.push_back(raw[t]);
        }
        ++word;
      } else {
        out.push_back(raw[t]);
      }
    }
    emit_insertions(n);

    std::string hypothesis;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (k) hypothesis += ' ';
      hypothesis += out[k];
    }
    const auto hypothesis_tokens = metrics::normalize(hypothesis, policy);
    if (metrics::align(reference_tokens, hypothesis_tokens) == wanted) return hypothesis;
  }
  throw Error(ErrorCode::SpecInfeasible,
              "no placement of " + std::to_string(spec.substitutions) + "/" +
                  std::to_string(spec.deletions) + "/" + std::to_string(spec.insertions) +
                  " edits in " + std::to_string(n) + " words yields an exact alignment");
}

}  // namespace fv::stt
