#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "farmvoice/reviews/corpus.hpp"

namespace fv::reviews {

/// The seven Venn regions over three classes plus the None count.
struct DistributionReport {
  std::size_t system_only = 0;
  std::size_t operations_only = 0;
  std::size_t support_only = 0;
  std::size_t system_operations = 0;
  std::size_t system_support = 0;
  std::size_t operations_support = 0;
  std::size_t all_three = 0;
  std::size_t none = 0;

  std::size_t relevant() const noexcept;  // sum of the seven regions
  std::size_t total() const noexcept { return relevant() + none; }
  std::size_t with(ReviewClass c) const noexcept;  // every region containing c

  friend bool operator==(const DistributionReport&, const DistributionReport&) = default;
};

DistributionReport distribution(std::span<const Labels> labels);
/// Throws Error{InvalidArgument} if any document is unclassified.
DistributionReport distribution(std::span<const ReviewDocument> documents);

std::string to_json(const DistributionReport& report);
std::string render_table(const DistributionReport& report);

}  // namespace fv::reviews
