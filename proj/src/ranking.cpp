#include "dynhs/ranking.hpp"

#include <random>
#include <stdexcept>

namespace dynhs {

QueueOrder parse_order(const std::string& text) {
  if (text == "bfs") return QueueOrder::kBreadthFirst;
  if (text == "prob") return QueueOrder::kProbability;
  throw std::invalid_argument("unknown order '" + text + "' (bfs|prob)");
}

std::string order_name(QueueOrder order) { return order == QueueOrder::kBreadthFirst ? "bfs" : "prob"; }

FaultModel::FaultModel(std::vector<double> pr) : pr_(std::move(pr)) {
  for (double p : pr_) {
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("fault probabilities must lie in (0, 0.5)");
  }
}

FaultModel FaultModel::uniform(int n, double p) { return FaultModel(std::vector<double>(static_cast<std::size_t>(n), p)); }

FaultModel FaultModel::random(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.01, 0.45);
  std::vector<double> pr(static_cast<std::size_t>(n));
  for (auto& p : pr) p = dist(rng);
  return FaultModel(std::move(pr));
}

double FaultModel::weight(const ComponentSet& s) const {
  double w = 1.0;
  for (int i : s) {
    double p = pr_.at(static_cast<std::size_t>(i - 1));
    w *= p / (1.0 - p);
  }
  return w;
}

double FaultModel::probability(const ComponentSet& s) const {
  double out = 1.0;
  for (int i = 1; i <= size(); ++i) {
    double p = pr_[static_cast<std::size_t>(i - 1)];
    out *= s.contains(i) ? p : 1.0 - p;
  }
  return out;
}

bool Ranker::before(const ComponentSet& a, const ComponentSet& b) const {
  if (order_ == QueueOrder::kBreadthFirst) {
    if (a.size() != b.size()) return a.size() < b.size();
  } else {
    double wa = model_.weight(a), wb = model_.weight(b);
    if (wa != wb) return wa > wb;
  }
  return a.items() < b.items();
}

}  // namespace dynhs
