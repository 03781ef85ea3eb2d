#include "dynhs/cnf.hpp"

#include <algorithm>
#include <cstdlib>

namespace dynhs::logic {

struct CnfEncoder::Nnf {
  enum Kind { kTrue, kFalse, kLit, kAnd, kOr } kind;
  int lit = 0;
  std::vector<Nnf> kids;
};

namespace {

using Nnf = CnfEncoder::Nnf;

Nnf leaf(Nnf::Kind kind, int lit = 0) { return {kind, lit, {}}; }
Nnf conj(std::vector<Nnf> kids) { return {Nnf::kAnd, 0, std::move(kids)}; }
Nnf disj(std::vector<Nnf> kids) { return {Nnf::kOr, 0, std::move(kids)}; }

bool lit_less(int a, int b) {
  if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
  return a < b;
}

// Merges two sorted clauses; returns false for a tautology.
bool merge(const Clause& a, const Clause& b, Clause& out) {
  out.clear();
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), lit_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] == -out[i - 1]) return false;
  }
  return true;
}

void normalize(std::vector<Clause>& clauses) {
  std::vector<Clause> kept;
  for (auto& c : clauses) {
    std::sort(c.begin(), c.end(), lit_less);
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool taut = false;
    for (std::size_t i = 1; i < c.size(); ++i) taut = taut || c[i] == -c[i - 1];
    if (!taut) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  clauses = std::move(kept);
}

}  // namespace

int CnfEncoder::variable(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  names_.push_back(name);
  int id = static_cast<int>(names_.size());
  ids_.emplace(name, id);
  return id;
}

int CnfEncoder::fresh() {
  // Not a valid identifier, so it cannot clash with a formula variable.
  return variable("$t" + std::to_string(++aux_));
}

std::vector<Clause> CnfEncoder::encode(const Formula& f) {
  // Negation normal form, pushed down by polarity.
  std::function<Nnf(const Formula&, bool)> nnf = [&](const Formula& g, bool pos) -> Nnf {
    auto ch = g.children();
    switch (g.op()) {
      case Op::kTrue: return leaf(pos ? Nnf::kTrue : Nnf::kFalse);
      case Op::kFalse: return leaf(pos ? Nnf::kFalse : Nnf::kTrue);
      case Op::kVar: {
        int v = variable(g.name());
        return leaf(Nnf::kLit, pos ? v : -v);
      }
      case Op::kNot: return nnf(ch[0], !pos);
      case Op::kAnd:
      case Op::kOr: {
        std::vector<Nnf> kids;
        for (const auto& c : ch) kids.push_back(nnf(c, pos));
        return (g.op() == Op::kAnd) == pos ? conj(std::move(kids)) : disj(std::move(kids));
      }
      case Op::kImplies:
        if (pos) return disj({nnf(ch[0], false), nnf(ch[1], true)});
        return conj({nnf(ch[0], true), nnf(ch[1], false)});
      case Op::kIff:
        if (pos) {
          return conj({disj({nnf(ch[0], false), nnf(ch[1], true)}),
                       disj({nnf(ch[0], true), nnf(ch[1], false)})});
        }
        return disj({conj({nnf(ch[0], true), nnf(ch[1], false)}),
                     conj({nnf(ch[0], false), nnf(ch[1], true)})});
    }
    return leaf(Nnf::kTrue);
  };
  std::vector<Clause> side;
  auto out = clausify(nnf(f, true), side);
  out.insert(out.end(), side.begin(), side.end());
  normalize(out);
  return out;
}

std::vector<Clause> CnfEncoder::clausify(const Nnf& n, std::vector<Clause>& side) {
  switch (n.kind) {
    case Nnf::kTrue: return {};
    case Nnf::kFalse: return {Clause{}};
    case Nnf::kLit: return {Clause{n.lit}};
    case Nnf::kAnd: {
      std::vector<Clause> out;
      for (const auto& k : n.kids) {
        auto part = clausify(k, side);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case Nnf::kOr: {
      std::vector<Clause> acc{Clause{}};
      for (const auto& k : n.kids) {
        auto part = clausify(k, side);
        if (part.empty()) return {};
        if (part.size() > 1 && acc.size() * part.size() > product_limit_) {
          int t = fresh();
          for (auto& c : part) {
            c.push_back(-t);
            side.push_back(std::move(c));
          }
          part = {Clause{t}};
        }
        std::vector<Clause> next;
        Clause merged;
        for (const auto& a : acc) {
          for (auto b : part) {
            std::sort(b.begin(), b.end(), lit_less);
            if (merge(a, b, merged)) next.push_back(merged);
          }
        }
        acc = std::move(next);
        if (acc.empty()) return {};
      }
      return acc;
    }
  }
  return {};
}

std::string ClauseSet::literal_str(int lit) const {
  const std::string& name = names.at(static_cast<std::size_t>(std::abs(lit)) - 1);
  return lit < 0 ? "!" + name : name;
}

std::string ClauseSet::clause_str(const Clause& c) const {
  if (c.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " | ";
    out += literal_str(c[i]);
  }
  return out;
}

ClauseSet to_cnf(std::span<const Formula> sentences) {
  CnfEncoder enc;
  ClauseSet out;
  for (const auto& f : sentences) {
    auto part = enc.encode(f);
    out.clauses.insert(out.clauses.end(), part.begin(), part.end());
  }
  normalize(out.clauses);
  out.names = enc.names();
  return out;
}

}  // namespace dynhs::logic
