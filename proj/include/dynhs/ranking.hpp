#pragma once

#include <string>
#include <vector>

#include "dynhs/component_set.hpp"

namespace dynhs {

enum class QueueOrder { kBreadthFirst, kProbability };

QueueOrder parse_order(const std::string& text);  // "bfs" | "prob"
std::string order_name(QueueOrder order);

// Axiom fault probabilities, each in (0, 0.5), so that a proper superset is
// never more probable than its subset.
class FaultModel {
 public:
  FaultModel() = default;
  explicit FaultModel(std::vector<double> pr);
  static FaultModel uniform(int n, double p = 0.1);
  static FaultModel random(int n, unsigned seed);

  const std::vector<double>& pr() const { return pr_; }
  int size() const { return static_cast<int>(pr_.size()); }
  // Relative weight prod p/(1-p); proportional to the node probability.
  double weight(const ComponentSet& s) const;
  // prod_{i in s} p_i * prod_{i not in s} (1 - p_i)
  double probability(const ComponentSet& s) const;

 private:
  std::vector<double> pr_;
};

// Queue order over node sets. Ties break lexicographically on the items.
class Ranker {
 public:
  Ranker(QueueOrder order, FaultModel model) : order_(order), model_(std::move(model)) {}

  QueueOrder order() const { return order_; }
  const FaultModel& model() const { return model_; }
  // True when `a` must be dequeued strictly before `b`.
  bool before(const ComponentSet& a, const ComponentSet& b) const;

  // Index at which to insert `s` after every entry not ranked below it.
  template <class Seq, class SetOf>
  std::size_t insert_position(const Seq& seq, const ComponentSet& s, SetOf set_of) const {
    std::size_t lo = 0, hi = seq.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (before(s, set_of(seq[mid]))) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }

 private:
  QueueOrder order_;
  FaultModel model_;
};

}  // namespace dynhs
