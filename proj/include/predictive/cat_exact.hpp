#pragma once

#include <span>
#include <vector>

#include "predictive/errors.hpp"
#include "predictive/kernel.hpp"
#include "predictive/rational.hpp"

namespace predictive {

// Exact mirror of a categorical kernel: the same rule evaluated on rational
// (or double) pmf vectors. Shared by the families whose exact checkers run in
// rational arithmetic.
struct ExactCatKernel {
  Kernel::Rule rule = Kernel::Rule::Identity;
  int alphabet = 0;
  std::vector<std::vector<char>> cells;
  std::vector<char> augment;

  static ExactCatKernel from(const Kernel& k) {
    if (k.space() != SpaceTag::Categorical)
      throw SpaceMismatch("exact kernels require a categorical space");
    ExactCatKernel e;
    e.rule = k.rule();
    e.alphabet = k.base().alphabet_size();
    for (const auto& c : k.cells()) e.cells.push_back(c.mask());
    if (k.rule() == Kernel::Rule::SetAugmented) e.augment = k.augment_set().mask();
    return e;
  }

  int cell_of(int x) const {
    for (size_t i = 0; i < cells.size(); ++i)
      if (cells[i][x]) return static_cast<int>(i);
    throw PartitionCoverageError("observation lies in no partition cell");
  }

  // alpha(.|x) as a pmf over the alphabet, given the base pmf nu.
  template <class T>
  std::vector<T> apply(const std::vector<T>& nu, int x) const {
    std::vector<T> out(alphabet, scalar_from_double<T>(0.0));
    switch (rule) {
      case Kernel::Rule::Identity:
        out[x] = scalar_from_double<T>(1.0);
        return out;
      case Kernel::Rule::Constant:
        return nu;
      case Kernel::Rule::Partition: {
        const auto& cell = cells[cell_of(x)];
        T total = scalar_from_double<T>(0.0);
        for (int i = 0; i < alphabet; ++i)
          if (cell[i]) total += nu[i];
        for (int i = 0; i < alphabet; ++i)
          if (cell[i]) out[i] = nu[i] / total;
        return out;
      }
      case Kernel::Rule::SetAugmented: {
        if (augment[x]) {
          out[x] = scalar_from_double<T>(1.0);
          return out;
        }
        const auto& cell = cells[cell_of(x)];
        T total = scalar_from_double<T>(0.0);
        for (int i = 0; i < alphabet; ++i)
          if (cell[i] && !augment[i]) total += nu[i];
        if (total == scalar_from_double<T>(0.0))
          throw ConditioningError("set-augmented kernel hit a null cell");
        for (int i = 0; i < alphabet; ++i)
          if (cell[i] && !augment[i]) out[i] = nu[i] / total;
        return out;
      }
    }
    throw ParamError("unreachable kernel rule");
  }
};

// Exact pmf of a categorical Measure (atoms plus pmf components), with every
// double weight converted exactly.
std::vector<Rational> exact_pmf_of(const Measure& m);

}  // namespace predictive
