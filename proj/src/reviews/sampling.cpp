#include <algorithm>
#include <map>
#include <random>

#include "farmvoice/reviews/preprocess.hpp"

namespace fv::reviews {

std::vector<ReviewDocument> bootstrap_sample(const std::vector<ReviewDocument>& corpus,
                                             std::size_t per_app_cap, std::uint64_t seed) {
  std::vector<std::string> app_order;
  std::map<std::string, std::vector<std::size_t>> by_app;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto [it, inserted] = by_app.try_emplace(corpus[i].app);
    if (inserted) app_order.push_back(corpus[i].app);
    it->second.push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (const auto& app : app_order) {
    auto& indices = by_app[app];
    const std::size_t take = std::min(per_app_cap, indices.size());
    // Partial Fisher-Yates: the first `take` slots become the sample.
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng() % (indices.size() - k));
      std::swap(indices[k], indices[j]);
    }
    chosen.insert(chosen.end(), indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<ReviewDocument> sample;
  sample.reserve(chosen.size());
  for (std::size_t i : chosen) sample.push_back(corpus[i]);
  return sample;
}

}  // namespace fv::reviews
