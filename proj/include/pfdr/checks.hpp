#ifndef PFDR_CHECKS_HPP
#define PFDR_CHECKS_HPP

#include <string>
#include <vector>

namespace pfdr {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick invariant suite: scale-learner wealth, estimator unbiasedness,
/// barrier derivatives, mirror-step exactness, feasibility, exclusive routing,
/// grid covering, origin regret and trace self-consistency.
std::vector<CheckResult> run_invariant_checks();

}  // namespace pfdr

#endif  // PFDR_CHECKS_HPP
