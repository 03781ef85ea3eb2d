#include "dynhs/component_set.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dynhs {

ComponentSet::ComponentSet(std::initializer_list<int> items) : ComponentSet(std::vector<int>(items)) {}

ComponentSet::ComponentSet(std::vector<int> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool ComponentSet::contains(int i) const { return std::binary_search(items_.begin(), items_.end(), i); }

bool ComponentSet::subset_of(const ComponentSet& other) const {
  return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

bool ComponentSet::intersects(const ComponentSet& other) const {
  auto a = items_.begin(), b = other.items_.begin();
  while (a != items_.end() && b != other.items_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a;
    else ++b;
  }
  return false;
}

ComponentSet ComponentSet::with(int i) const {
  ComponentSet out = *this;
  auto pos = std::lower_bound(out.items_.begin(), out.items_.end(), i);
  if (pos == out.items_.end() || *pos != i) out.items_.insert(pos, i);
  return out;
}

ComponentSet ComponentSet::unite(const ComponentSet& other) const {
  std::vector<int> out;
  std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                 std::back_inserter(out));
  return ComponentSet(std::move(out));
}

ComponentSet ComponentSet::minus(const ComponentSet& other) const {
  std::vector<int> out;
  std::set_difference(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                      std::back_inserter(out));
  return ComponentSet(std::move(out));
}

namespace {

std::string join(const std::vector<int>& items, const char* open, const char* close, const char* prefix) {
  std::string out = open;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += prefix + std::to_string(items[i]);
  }
  return out + close;
}

std::string join_sets(const Collection& sets, std::string (ComponentSet::*fmt)() const) {
  std::string out = "{";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += ",";
    out += (sets[i].*fmt)();
  }
  return out + "}";
}

}  // namespace

std::string ComponentSet::diag_str() const { return join(items_, "[", "]", ""); }
std::string ComponentSet::conflict_str() const { return join(items_, "<", ">", ""); }
std::string ComponentSet::axiom_str() const { return join(items_, "[", "]", "a"); }

Collection canonical(Collection sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

ComponentSet full_set(int n) {
  std::vector<int> items(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) items[static_cast<std::size_t>(i)] = i + 1;
  return ComponentSet(std::move(items));
}

std::string format_diagnoses(const Collection& sets) { return join_sets(sets, &ComponentSet::diag_str); }
std::string format_conflicts(const Collection& sets) { return join_sets(sets, &ComponentSet::conflict_str); }

bool is_hitting_set(const Collection& collection, const ComponentSet& x) {
  ComponentSet all;
  for (const auto& s : collection) {
    if (!s.intersects(x)) return false;
    all = all.unite(s);
  }
  return x.subset_of(all);
}

ComponentSet parse_component_set(const std::string& text) {
  std::vector<int> items;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      items.push_back(std::stoi(text.substr(i, j - i)));
      i = j;
    } else if (c == 'a' || c == ',' || c == '[' || c == ']' || c == '<' || c == '>' ||
               std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      throw std::invalid_argument("bad component set '" + text + "'");
    }
  }
  return ComponentSet(std::move(items));
}

}  // namespace dynhs
