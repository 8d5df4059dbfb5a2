#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/nlp/resources.hpp"
#include "farmvoice/reviews/corpus.hpp"

namespace fv::reviews {

enum class RemovalReason { Duplicate, LengthFilter, Spurious };

std::string_view to_string(RemovalReason r) noexcept;

struct Removal {
  std::string id;
  RemovalReason reason = RemovalReason::Duplicate;
  std::string detail;
};

struct PreprocessConfig {
  std::size_t max_short_length = 10;     // reviews with <= this many characters go
  double max_special_ratio = 0.5;        // above: mostly emoji/special characters
  double min_stopword_ratio = 0.05;      // below: not in the target language
  Language target_language = Language::En;
};

struct PreprocessResult {
  std::vector<ReviewDocument> kept;
  std::vector<Removal> removed;
};

/// Drops exact-text duplicates (first occurrence kept), reviews made mostly
/// of special characters or emoji, reviews of at most `max_short_length`
/// characters, and reviews whose stopword ratio marks them as another
/// language, checked in that order. Each removal records its reason.
PreprocessResult preprocess(const std::vector<ReviewDocument>& corpus,
                            const PreprocessConfig& config = {},
                            const nlp::Resources& resources = nlp::Resources::builtin());

/// Per app (in order of first appearance), min(cap, available) reviews
/// drawn without replacement from a generator seeded with `seed`. Sampled
/// reviews keep their corpus order.
std::vector<ReviewDocument> bootstrap_sample(const std::vector<ReviewDocument>& corpus,
                                             std::size_t per_app_cap, std::uint64_t seed);

}  // namespace fv::reviews
