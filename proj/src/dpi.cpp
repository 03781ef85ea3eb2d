#include "dynhs/dpi.hpp"

#include <fstream>
#include <sstream>

namespace dynhs {

std::vector<Formula> Dpi::select(const ComponentSet& ids) const {
  std::vector<Formula> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(axioms.at(static_cast<std::size_t>(i - 1)));
  return out;
}

bool Acquired::contains(const Formula& f) const {
  return logic::contains(positive, f) || logic::contains(negative, f);
}

Acquired add_measurement(Acquired acquired, const Measurement& m) {
  if (acquired.contains(m.sentence)) {
    throw std::invalid_argument("duplicate measurement '" + m.sentence.str() + "'");
  }
  (m.outcome ? acquired.positive : acquired.negative).push_back(m.sentence);
  return acquired;
}

bool is_faulty(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& kept) {
  std::vector<Formula> kb = dpi.select(kept);
  kb.insert(kb.end(), dpi.background.begin(), dpi.background.end());
  kb.insert(kb.end(), dpi.positive.begin(), dpi.positive.end());
  kb.insert(kb.end(), acq.positive.begin(), acq.positive.end());
  if (!r.is_consistent(kb)) return true;
  for (const auto& n : dpi.negative) {
    if (r.entails(kb, n)) return true;
  }
  for (const auto& n : acq.negative) {
    if (r.entails(kb, n)) return true;
  }
  return false;
}

bool is_diagnosis(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& d) {
  return !is_faulty(r, dpi, acq, full_set(dpi.size()).minus(d));
}

bool is_conflict(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& c) {
  return is_faulty(r, dpi, acq, c);
}

namespace {

// Subsets of {1..n} in cardinality order; `pred` must be upward closed.
Collection minimal_sets(int n, int cap, const std::function<bool(const ComponentSet&)>& pred) {
  if (n > cap) throw std::length_error("brute force limited to " + std::to_string(cap) + " axioms");
  std::vector<ComponentSet> subsets;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> items;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) items.push_back(i + 1);
    }
    subsets.emplace_back(std::move(items));
  }
  std::sort(subsets.begin(), subsets.end());
  Collection found;
  for (const auto& s : subsets) {
    bool covered = false;
    for (const auto& f : found) covered = covered || f.subset_of(s);
    if (!covered && pred(s)) found.push_back(s);
  }
  return found;
}

}  // namespace

Collection brute_force_min_diagnoses(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, int cap) {
  return minimal_sets(dpi.size(), cap, [&](const ComponentSet& s) { return is_diagnosis(r, dpi, acq, s); });
}

Collection brute_force_min_conflicts(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, int cap) {
  return minimal_sets(dpi.size(), cap, [&](const ComponentSet& s) { return is_conflict(r, dpi, acq, s); });
}

void validate(logic::Reasoner& r, const Dpi& dpi) {
  if (is_faulty(r, dpi, {}, {})) {
    throw ValidationError("background and positive measurements are inconsistent or entail a negative one");
  }
}

void validate_for_session(logic::Reasoner& r, const Dpi& dpi) {
  if (dpi.axioms.empty()) throw ValidationError("no component axioms");
  validate(r, dpi);
  if (is_diagnosis(r, dpi, {}, {})) throw ValidationError("nothing to diagnose: the empty set is a diagnosis");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Formula parse_at(const std::string& text, int line, int offset) {
  try {
    return logic::parse_formula(text);
  } catch (const logic::ParseError& e) {
    std::string msg = e.what();
    auto pos = msg.find(": ");
    throw logic::ParseError(pos == std::string::npos ? msg : msg.substr(pos + 2), line + e.line() - 1,
                            e.line() == 1 ? e.column() + offset : e.column());
  }
}

}  // namespace

Dpi parse_dpi(const std::string& text) {
  Dpi dpi;
  std::istringstream in(text);
  std::string raw;
  char section = 0;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string body = raw.substr(0, raw.find('#'));
    std::string line = trim(body);
    if (line.empty()) continue;
    if (line.size() == 3 && line[0] == '[' && line[2] == ']' && std::string("OBPN").find(line[1]) != std::string::npos) {
      section = line[1];
      continue;
    }
    int offset = static_cast<int>(body.find_first_not_of(" \t"));
    switch (section) {
      case 'O': {
        auto colon = line.find(':');
        std::string expected = "a" + std::to_string(dpi.axioms.size() + 1);
        if (colon == std::string::npos || trim(line.substr(0, colon)) != expected) {
          throw logic::ParseError("expected '" + expected + ": formula'", line_no, offset + 1);
        }
        dpi.axioms.push_back(parse_at(line.substr(colon + 1), line_no, offset + static_cast<int>(colon) + 1));
        break;
      }
      case 'B': dpi.background.push_back(parse_at(line, line_no, offset)); break;
      case 'P': dpi.positive.push_back(parse_at(line, line_no, offset)); break;
      case 'N': dpi.negative.push_back(parse_at(line, line_no, offset)); break;
      default: throw logic::ParseError("content outside of a section", line_no, offset + 1);
    }
  }
  return dpi;
}

Dpi load_dpi(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dpi(buf.str());
}

std::string format_dpi(const Dpi& dpi) {
  std::string out = "[O]\n";
  for (std::size_t i = 0; i < dpi.axioms.size(); ++i) {
    out += "a" + std::to_string(i + 1) + ": " + dpi.axioms[i].str() + "\n";
  }
  auto section = [&](const char* name, const std::vector<Formula>& fs) {
    out += std::string(name) + "\n";
    for (const auto& f : fs) out += f.str() + "\n";
  };
  section("[B]", dpi.background);
  section("[P]", dpi.positive);
  section("[N]", dpi.negative);
  return out;
}

}  // namespace dynhs
