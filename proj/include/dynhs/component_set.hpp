#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace dynhs {

// Set of 1-based axiom indices, kept sorted.
class ComponentSet {
 public:
  ComponentSet() = default;
  ComponentSet(std::initializer_list<int> items);
  explicit ComponentSet(std::vector<int> items);

  const std::vector<int>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool contains(int i) const;
  bool subset_of(const ComponentSet& other) const;
  bool proper_subset_of(const ComponentSet& other) const {
    return size() < other.size() && subset_of(other);
  }
  bool intersects(const ComponentSet& other) const;

  ComponentSet with(int i) const;
  ComponentSet unite(const ComponentSet& other) const;
  ComponentSet minus(const ComponentSet& other) const;

  // "[1,3]" for diagnoses, "<1,2>" for conflicts.
  std::string diag_str() const;
  std::string conflict_str() const;
  // "[a1,a3]" style, used in reports addressed to people.
  std::string axiom_str() const;

  friend bool operator==(const ComponentSet& a, const ComponentSet& b) { return a.items_ == b.items_; }
  // Cardinality first, then lexicographic.
  friend bool operator<(const ComponentSet& a, const ComponentSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.items_ < b.items_;
  }

 private:
  std::vector<int> items_;
};

using Collection = std::vector<ComponentSet>;

// Sorts by (cardinality, lexicographic) and drops duplicates.
Collection canonical(Collection sets);
ComponentSet full_set(int n);
std::string format_diagnoses(const Collection& sets);
std::string format_conflicts(const Collection& sets);

bool is_hitting_set(const Collection& collection, const ComponentSet& x);

// Parses "[1,3]", "1,3", "a1,a3" or "<1,3>".
ComponentSet parse_component_set(const std::string& text);

}  // namespace dynhs
