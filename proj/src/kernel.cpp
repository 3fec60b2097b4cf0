#include "predictive/kernel.hpp"

#include <limits>

#include "predictive/errors.hpp"

namespace predictive {

Kernel Kernel::identity(Measure base) {
  return Kernel(Rule::Identity, std::move(base));
}

Kernel Kernel::constant(Measure base) {
  return Kernel(Rule::Constant, std::move(base));
}

Kernel Kernel::partition(Measure base, std::vector<Event> cells) {
  Kernel k(Rule::Partition, std::move(base));
  k.cells_ = std::move(cells);
  k.validate_cells();
  return k;
}

Kernel Kernel::partition_subsets(Measure base,
                                 const std::vector<std::vector<int>>& subsets) {
  const int n = base.alphabet_size();
  std::vector<Event> cells;
  cells.reserve(subsets.size());
  for (const auto& s : subsets) cells.push_back(Event::cat_subset(n, s));
  return partition(std::move(base), std::move(cells));
}

Kernel Kernel::partition_breakpoints(Measure base,
                                     const std::vector<double>& breakpoints) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Event> cells;
  double prev = -inf;
  for (double b : breakpoints) {
    if (!(b > prev)) throw ParamError("breakpoints must be strictly increasing");
    cells.push_back(Event::interval(prev, b, false, true));
    prev = b;
  }
  cells.push_back(Event::interval(prev, inf, false, false));
  return partition(std::move(base), std::move(cells));
}

Kernel Kernel::set_augmented(Measure base, std::vector<Event> cells,
                             Event augment) {
  Kernel k(Rule::SetAugmented, std::move(base));
  k.cells_ = std::move(cells);
  k.augment_ = std::move(augment);
  k.validate_cells();
  return k;
}

const Event& Kernel::augment_set() const {
  if (!augment_) throw ParamError("kernel has no augment set");
  return *augment_;
}

void Kernel::validate_cells() const {
  if (cells_.empty()) throw ParamError("partition kernel needs cells");
  // pairwise disjoint
  for (size_t i = 0; i < cells_.size(); ++i)
    for (size_t j = i + 1; j < cells_.size(); ++j)
      if (!cells_[i].intersect(cells_[j]).empty())
        throw ParamError("partition cells overlap");
  // cover the space: complement of the union must be empty
  if (space() == SpaceTag::Categorical) {
    std::vector<char> seen(base_.alphabet_size(), 0);
    for (const auto& c : cells_)
      for (size_t i = 0; i < c.mask().size(); ++i)
        if (c.mask()[i]) seen[i] = 1;
    for (char s : seen)
      if (!s) throw ParamError("partition cells do not cover the alphabet");
  } else {
    std::vector<Interval> all;
    for (const auto& c : cells_)
      all.insert(all.end(), c.intervals().begin(), c.intervals().end());
    if (!Event::real_union(std::move(all)).complement().empty())
      throw ParamError("partition cells do not cover the line");
  }
  for (const auto& c : cells_)
    if (!(base_.prob(c) > 0.0))
      throw ParamError("every partition cell needs positive base mass");
}

int Kernel::cell_of(const Observation& x) const {
  for (size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].contains(x)) return static_cast<int>(i);
  throw PartitionCoverageError("observation lies in no partition cell");
}

Measure Kernel::apply(const Observation& x) const {
  if (x.space() != space()) throw SpaceMismatch("kernel/observation mismatch");
  switch (rule_) {
    case Rule::Identity:
      return Measure::point_mass(x, base_.alphabet_size());
    case Rule::Constant:
      return base_;
    case Rule::Partition:
      return base_.condition(cells_[cell_of(x)]);
    case Rule::SetAugmented: {
      if (augment_->contains(x)) return Measure::point_mass(x, base_.alphabet_size());
      const Event target = augment_->complement().intersect(cells_[cell_of(x)]);
      return base_.condition(target);
    }
  }
  throw ParamError("unreachable kernel rule");
}

}  // namespace predictive
