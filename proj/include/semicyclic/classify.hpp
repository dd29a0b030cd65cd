#pragma once

// Class flags of a mapping derived from its audit verdicts.

#include "semicyclic/audit.hpp"

#include <cstddef>
#include <string_view>

namespace semicyclic {

struct FlagEvidence {
  bool value = false;
  bool conclusive = true;
  std::size_t samples = 0;
  double worst_slack = 0.0;
};

/// Fewer checked samples than this in any contributing verdict makes a flag
/// inconclusive (and false).
inline constexpr std::size_t kMinConclusiveSamples = 10;

struct MappingClass {
  FlagEvidence semi_cyclic;
  FlagEvidence cyclic;
  FlagEvidence nonexpansive;
  FlagEvidence contractive;
  FlagEvidence strict_semi_cyclic;
  FlagEvidence strict_cyclic;
  FlagEvidence strict_nonexpansive;
  FlagEvidence strict_contractive;
  /// All adjacent gaps vanish, or the audited gains never exceed one.
  bool equivalence_hypotheses = false;

  bool strict_matches_nonstrict() const;
};

MappingClass classify(const SemiCyclicMapping& map, const AuditReport& audit);

/// Visits the flags in report order with their names.
template <typename F>
void for_each_flag(const MappingClass& c, F&& f) {
  f(std::string_view("semi_cyclic"), c.semi_cyclic);
  f(std::string_view("cyclic"), c.cyclic);
  f(std::string_view("nonexpansive"), c.nonexpansive);
  f(std::string_view("contractive"), c.contractive);
  f(std::string_view("strict_semi_cyclic"), c.strict_semi_cyclic);
  f(std::string_view("strict_cyclic"), c.strict_cyclic);
  f(std::string_view("strict_nonexpansive"), c.strict_nonexpansive);
  f(std::string_view("strict_contractive"), c.strict_contractive);
}

}  // namespace semicyclic
