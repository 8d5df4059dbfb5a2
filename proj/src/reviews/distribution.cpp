#include "farmvoice/reviews/distribution.hpp"

#include <cstdio>

#include <json.hpp>

#include "farmvoice/core/error.hpp"

namespace fv::reviews {

std::size_t DistributionReport::relevant() const noexcept {
  return system_only + operations_only + support_only + system_operations + system_support +
         operations_support + all_three;
}

std::size_t DistributionReport::with(ReviewClass c) const noexcept {
  switch (c) {
    case ReviewClass::System: return system_only + system_operations + system_support + all_three;
    case ReviewClass::Operations:
      return operations_only + system_operations + operations_support + all_three;
    case ReviewClass::CustomerSupport:
      return support_only + system_support + operations_support + all_three;
  }
  return 0;
}

DistributionReport distribution(std::span<const Labels> labels) {
  DistributionReport r;
  for (Labels l : labels) {
    const bool s = l.has(ReviewClass::System);
    const bool o = l.has(ReviewClass::Operations);
    const bool c = l.has(ReviewClass::CustomerSupport);
    if (s && o && c) ++r.all_three;
    else if (s && o) ++r.system_operations;
    else if (s && c) ++r.system_support;
    else if (o && c) ++r.operations_support;
    else if (s) ++r.system_only;
    else if (o) ++r.operations_only;
    else if (c) ++r.support_only;
    else ++r.none;
  }
  return r;
}

DistributionReport distribution(std::span<const ReviewDocument> documents) {
  std::vector<Labels> labels;
  labels.reserve(documents.size());
  for (const auto& d : documents) {
    if (!d.labels) throw Error(ErrorCode::InvalidArgument, "review " + d.id + " is not classified");
    labels.push_back(*d.labels);
  }
  return distribution(labels);
}

std::string to_json(const DistributionReport& r) {
  const nlohmann::json j = {
      {"regions",
       {{"system_only", r.system_only},
        {"operations_only", r.operations_only},
        {"customer_support_only", r.support_only},
        {"system_operations", r.system_operations},
        {"system_customer_support", r.system_support},
        {"operations_customer_support", r.operations_support},
        {"all_three", r.all_three}}},
      {"none", r.none},
      {"totals",
       {{"system", r.with(ReviewClass::System)},
        {"operations", r.with(ReviewClass::Operations)},
        {"customer_support", r.with(ReviewClass::CustomerSupport)},
        {"relevant", r.relevant()},
        {"corpus", r.total()}}},
  };
  return j.dump(2) + "\n";
}

std::string render_table(const DistributionReport& r) {
  const double total = static_cast<double>(r.total());
  const double relevant = static_cast<double>(r.relevant());
  auto pct = [](std::size_t n, double of) { return of > 0 ? 100.0 * static_cast<double>(n) / of : 0.0; };
  std::string out;
  char line[128];
  auto row = [&](const char* name, std::size_t n) {
    std::snprintf(line, sizeof line, "%-34s %6zu %6.1f%%\n", name, n, pct(n, total));
    out += line;
  };
  row("System only", r.system_only);
  row("Operations only", r.operations_only);
  row("Customer Support only", r.support_only);
  row("System + Operations", r.system_operations);
  row("System + Customer Support", r.system_support);
  row("Operations + Customer Support", r.operations_support);
  row("System + Operations + Cust. Supp.", r.all_three);
  row("None", r.none);
  row("Total", r.total());
  for (auto c : {ReviewClass::System, ReviewClass::Operations, ReviewClass::CustomerSupport}) {
    std::snprintf(line, sizeof line, "%-16s %6zu (%5.1f%% of relevant)\n",
                  std::string(to_string(c)).c_str(), r.with(c), pct(r.with(c), relevant));
    out += line;
  }
  return out;
}

}  // namespace fv::reviews
