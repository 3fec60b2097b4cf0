#pragma once

#include <optional>
#include <vector>

#include "predictive/measure.hpp"

namespace predictive {

// A measurable family alpha(.|x) of probability measures indexed by points of
// the sample space. Four rules cover the constructions in use:
//   identity       alpha_x = delta_x
//   partition      alpha_x = nu(.|H_x) for a countable partition H
//   set_augmented  beta_x  = delta_x if x in A, else nu(.|A^c cap H_x)
//   constant       alpha_x = nu
class Kernel {
 public:
  enum class Rule { Identity, Partition, SetAugmented, Constant };

  static Kernel identity(Measure base);
  static Kernel constant(Measure base);
  static Kernel partition(Measure base, std::vector<Event> cells);
  // Categorical partition from index subsets.
  static Kernel partition_subsets(Measure base,
                                  const std::vector<std::vector<int>>& subsets);
  // Real-line partition from breakpoints b1 < ... < bk:
  // (-inf, b1], (b1, b2], ..., (bk, inf).
  static Kernel partition_breakpoints(Measure base,
                                      const std::vector<double>& breakpoints);
  static Kernel set_augmented(Measure base, std::vector<Event> cells,
                              Event augment);

  Rule rule() const { return rule_; }
  const Measure& base() const { return base_; }
  const std::vector<Event>& cells() const { return cells_; }
  const Event& augment_set() const;
  SpaceTag space() const { return base_.space(); }

  // Index of the unique cell containing x; PartitionCoverageError otherwise.
  int cell_of(const Observation& x) const;

  // The measure alpha(.|x).
  Measure apply(const Observation& x) const;

 private:
  Kernel(Rule rule, Measure base) : rule_(rule), base_(std::move(base)) {}
  void validate_cells() const;

  Rule rule_;
  Measure base_;
  std::vector<Event> cells_;
  std::optional<Event> augment_;
};

inline Measure kernel_apply(const Kernel& k, const Observation& x) {
  return k.apply(x);
}

}  // namespace predictive
