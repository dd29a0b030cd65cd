#include "semicyclic/classify.hpp"

#include <algorithm>
#include <initializer_list>

namespace semicyclic {

namespace {

FlagEvidence combine(std::initializer_list<const Verdict*> verdicts, bool extra = true) {
  FlagEvidence flag;
  flag.value = extra;
  flag.samples = std::numeric_limits<std::size_t>::max();
  flag.worst_slack = -std::numeric_limits<double>::infinity();
  for (const Verdict* v : verdicts) {
    flag.value = flag.value && v->holds;
    flag.samples = std::min(flag.samples, v->checked);
    flag.worst_slack = std::max(flag.worst_slack, v->worst_slack);
  }
  if (flag.samples < kMinConclusiveSamples) {
    flag.conclusive = false;
    flag.value = false;
  }
  return flag;
}

}  // namespace

bool MappingClass::strict_matches_nonstrict() const {
  return strict_semi_cyclic.value == semi_cyclic.value && strict_cyclic.value == cyclic.value &&
         strict_nonexpansive.value == nonexpansive.value &&
         strict_contractive.value == contractive.value;
}

MappingClass classify(const SemiCyclicMapping& map, const AuditReport& audit) {
  const double k = map.inner().uniform_k();
  MappingClass c;
  c.semi_cyclic = combine({&audit.membership, &audit.inner_uniform});
  c.cyclic = combine({&audit.membership, &audit.inner_uniform, &audit.cyclic_floor});
  c.nonexpansive = combine({&audit.membership, &audit.inner_uniform, &audit.gain.upper}, k <= 1.0);
  c.contractive = combine({&audit.membership, &audit.inner_uniform, &audit.gain.upper}, k < 1.0);
  c.strict_semi_cyclic = combine({&audit.membership, &audit.strict});
  c.strict_cyclic = combine({&audit.membership, &audit.strict, &audit.cyclic_floor});
  c.strict_nonexpansive = combine({&audit.membership, &audit.strict, &audit.gain.upper}, k <= 1.0);
  c.strict_contractive = combine({&audit.membership, &audit.strict, &audit.gain.upper}, k < 1.0);

  const auto& gaps = map.partition().adjacent_gaps();
  const bool touching = std::all_of(gaps.begin(), gaps.end(), [&](double g) {
    return g <= map.partition().membership_tolerance();
  });
  c.equivalence_hypotheses = touching || (audit.gain.upper.holds && audit.gain.upper.checked > 0);
  return c;
}

}  // namespace semicyclic
