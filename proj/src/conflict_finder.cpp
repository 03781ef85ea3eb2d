#include "dynhs/conflict_finder.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dynhs {

namespace {

using Positions = std::vector<std::size_t>;
using Faulty = std::function<bool(const Positions&)>;

Positions join(const Positions& a, const Positions& b) {
  Positions out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Junker's recursion: `kept` is always part of the tested set, `delta` is
// what was added to it last.
Positions qx(const Positions& kept, const Positions& delta, const Positions& cand, const Faulty& faulty) {
  if (!delta.empty() && faulty(kept)) return {};
  if (cand.size() == 1) return cand;
  auto mid = cand.begin() + static_cast<std::ptrdiff_t>(cand.size() / 2);
  Positions c1(cand.begin(), mid), c2(mid, cand.end());
  Positions d2 = qx(join(kept, c1), c1, c2, faulty);
  Positions d1 = qx(join(kept, d2), d2, c1, faulty);
  return join(d1, d2);
}

}  // namespace

std::optional<Positions> quick_xplain(std::size_t n, const Faulty& faulty) {
  Positions all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (!faulty(all)) return std::nullopt;
  if (n == 0) return Positions{};
  return qx({}, {}, all, faulty);
}

std::optional<Positions> quick_xplain(logic::Reasoner& r, std::span<const Formula> background,
                                      std::span<const Formula> candidates, std::span<const Formula> negatives) {
  return quick_xplain(candidates.size(), [&](const Positions& pos) {
    std::vector<Formula> kb(background.begin(), background.end());
    for (auto p : pos) kb.push_back(candidates[p]);
    if (!r.is_consistent(kb)) return true;
    return std::any_of(negatives.begin(), negatives.end(), [&](const Formula& n) { return r.entails(kb, n); });
  });
}

std::optional<ComponentSet> QuickXplainFinder::find(const ComponentSet& universe, const Dpi& dpi,
                                                    const Acquired& acq) {
  const auto& ids = universe.items();
  auto result = quick_xplain(ids.size(), [&](const Positions& pos) {
    std::vector<int> kept;
    for (auto p : pos) kept.push_back(ids[p]);
    return is_faulty(reasoner_, dpi, acq, ComponentSet(std::move(kept)));
  });
  if (!result) return std::nullopt;
  std::vector<int> out;
  for (auto p : *result) out.push_back(ids[p]);
  return ComponentSet(std::move(out));
}

bool is_minimal_conflict(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& c) {
  if (!is_conflict(r, dpi, acq, c)) return false;
  for (int i : c) {
    if (is_conflict(r, dpi, acq, c.minus({i}))) return false;
  }
  return true;
}

ScriptedFinder::ScriptedFinder(logic::Reasoner& r, std::vector<ScriptEntry> script,
                               std::shared_ptr<ConflictFinder> fallback)
    : reasoner_(r), script_(std::move(script)), checked_(script_.size(), false), fallback_(std::move(fallback)) {}

void ScriptedFinder::check(const ScriptEntry& e, const Dpi& dpi, const Acquired& acq) {
  if (e.result) {
    if (!e.result->subset_of(e.universe) || !is_minimal_conflict(reasoner_, dpi, acq, *e.result)) {
      throw std::logic_error("scripted conflict " + e.result->conflict_str() + " is not a minimal conflict within " +
                             e.universe.diag_str());
    }
  } else if (is_faulty(reasoner_, dpi, acq, e.universe)) {
    throw std::logic_error("scripted 'none' is wrong for universe " + e.universe.diag_str());
  }
}

std::optional<ComponentSet> ScriptedFinder::find(const ComponentSet& universe, const Dpi& dpi, const Acquired& acq) {
  for (std::size_t i = 0; i < script_.size(); ++i) {
    const auto& e = script_[i];
    if (e.universe == universe && logic::same_set(e.n_prime, acq.negative) &&
        logic::same_set(e.p_prime, acq.positive)) {
      if (!checked_[i]) {
        check(e, dpi, acq);
        checked_[i] = true;
      }
      ++hits_;
      return e.result;
    }
  }
  return fallback_->find(universe, dpi, acq);
}

std::vector<ScriptEntry> parse_conflict_script(const std::string& json_text) {
  auto doc = nlohmann::json::parse(json_text);
  if (!doc.is_array()) throw std::invalid_argument("conflict script must be a JSON list");
  auto formulas = [](const nlohmann::json& list) {
    std::vector<Formula> out;
    for (const auto& s : list) out.push_back(logic::parse_formula(s.get<std::string>()));
    return out;
  };
  std::vector<ScriptEntry> out;
  for (const auto& item : doc) {
    ScriptEntry e;
    e.universe = ComponentSet(item.at("universe").get<std::vector<int>>());
    e.n_prime = formulas(item.value("n_prime", nlohmann::json::array()));
    e.p_prime = formulas(item.value("p_prime", nlohmann::json::array()));
    const auto& res = item.at("result");
    if (res.is_string()) {
      if (res.get<std::string>() != "none") throw std::invalid_argument("result must be a list or \"none\"");
    } else {
      e.result = ComponentSet(res.get<std::vector<int>>());
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ScriptEntry> load_conflict_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_conflict_script(buf.str());
}

}  // namespace dynhs
