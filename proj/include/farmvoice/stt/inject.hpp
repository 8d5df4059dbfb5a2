#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "farmvoice/metrics/text.hpp"

namespace fv::stt {

struct ErrorInjectionSpec {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::uint64_t seed = 0;
};

/// Produces a hypothesis whose minimal word alignment against `reference`
/// (both normalized with `policy`) has exactly the requested substitution,
/// deletion and insertion counts. Substituted and inserted words are
/// nonsense tokens "zq1", "zq2", ... that never occur in the reference.
/// Positions are drawn from `spec.seed`; the zero spec returns the
/// reference unchanged.
///
/// Throws Error{SpecInfeasible} when s + d exceeds the word count, or when
/// no placement realizes the requested counts (e.g. deleting every word
/// while inserting, which any aligner scores as substitutions).
std::string inject_errors(std::string_view reference, const ErrorInjectionSpec& spec,
                          const metrics::NormalizationPolicy& policy = {});

}  // namespace fv::stt
