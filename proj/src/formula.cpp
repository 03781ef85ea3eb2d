#include "dynhs/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dynhs::logic {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Formula> children;
  std::string printed;
  std::string canonical;
};

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::kIff: return 1;
    case Op::kImplies: return 2;
    case Op::kOr: return 3;
    case Op::kAnd: return 4;
    case Op::kNot: return 5;
    default: return 6;
  }
}

std::string wrap(const std::string& text, bool parens) {
  return parens ? "(" + text + ")" : text;
}

// Renders a node given the already-rendered operands.
std::string render(Op op, const std::string& name, std::span<const Formula> children,
                   const std::vector<std::string>& parts) {
  switch (op) {
    case Op::kFalse: return "false";
    case Op::kTrue: return "true";
    case Op::kVar: return name;
    case Op::kNot: return "!" + wrap(parts[0], precedence(children[0].op()) < 5);
    case Op::kAnd:
    case Op::kOr: {
      const int own = precedence(op);
      const char* sep = op == Op::kAnd ? " & " : " | ";
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += wrap(parts[i], precedence(children[i].op()) <= own);
      }
      return out;
    }
    case Op::kImplies:
      return wrap(parts[0], precedence(children[0].op()) <= 2) + " -> " +
             wrap(parts[1], precedence(children[1].op()) < 2);
    case Op::kIff:
      return parts[0] + " <-> " + wrap(parts[1], precedence(children[1].op()) <= 1);
  }
  return {};
}

}  // namespace

Formula Formula::make(Op op, std::string name, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->name = std::move(name);
  node->children = std::move(children);

  std::vector<std::string> printed;
  printed.reserve(node->children.size());
  for (const auto& c : node->children) printed.push_back(c.str());
  node->printed = render(op, node->name, node->children, printed);

  // Canonical key: operands of & and | sorted by their own keys.
  std::vector<std::size_t> order(node->children.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (op == Op::kAnd || op == Op::kOr) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return node->children[a].key() < node->children[b].key();
    });
  }
  std::vector<Formula> sorted_children;
  std::vector<std::string> keys;
  for (std::size_t i : order) {
    sorted_children.push_back(node->children[i]);
    keys.push_back(node->children[i].key());
  }
  node->canonical = render(op, node->name, sorted_children, keys);
  return Formula(std::move(node));
}

Formula Formula::constant(bool value) { return make(value ? Op::kTrue : Op::kFalse, {}, {}); }

Formula Formula::var(std::string name) {
  if (!is_identifier(name) || name == "true" || name == "false") {
    throw std::invalid_argument("invalid variable name '" + name + "'");
  }
  return make(Op::kVar, std::move(name), {});
}

Formula Formula::negation(Formula child) { return make(Op::kNot, {}, {std::move(child)}); }

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.empty()) return constant(true);
  if (children.size() == 1) return children.front();
  return make(Op::kAnd, {}, std::move(children));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.empty()) return constant(false);
  if (children.size() == 1) return children.front();
  return make(Op::kOr, {}, std::move(children));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return make(Op::kImplies, {}, {std::move(lhs), std::move(rhs)});
}

Formula Formula::biconditional(Formula lhs, Formula rhs) {
  return make(Op::kIff, {}, {std::move(lhs), std::move(rhs)});
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
std::span<const Formula> Formula::children() const { return node_->children; }
const std::string& Formula::str() const { return node_->printed; }
const std::string& Formula::key() const { return node_->canonical; }

bool Formula::evaluate(const std::function<bool(const std::string&)>& assignment) const {
  const auto& ch = node_->children;
  switch (op()) {
    case Op::kFalse: return false;
    case Op::kTrue: return true;
    case Op::kVar: return assignment(name());
    case Op::kNot: return !ch[0].evaluate(assignment);
    case Op::kAnd:
      return std::all_of(ch.begin(), ch.end(), [&](const Formula& c) { return c.evaluate(assignment); });
    case Op::kOr:
      return std::any_of(ch.begin(), ch.end(), [&](const Formula& c) { return c.evaluate(assignment); });
    case Op::kImplies: return !ch[0].evaluate(assignment) || ch[1].evaluate(assignment);
    case Op::kIff: return ch[0].evaluate(assignment) == ch[1].evaluate(assignment);
  }
  return false;
}

void Formula::collect_variables(std::set<std::string>& out) const {
  if (op() == Op::kVar) {
    out.insert(name());
    return;
  }
  for (const auto& c : children()) c.collect_variables(out);
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text[0]);
  if (!std::isalpha(head) && text[0] != '_') return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace {

enum class Tok { kIdent, kTrue, kFalse, kNot, kAnd, kOr, kImplies, kIff, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      const int line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::kEnd, "", line, col});
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          advance();
        }
        std::string word(text_.substr(start, pos_ - start));
        Tok kind = word == "true" ? Tok::kTrue : word == "false" ? Tok::kFalse : Tok::kIdent;
        out.push_back({kind, std::move(word), line, col});
        continue;
      }
      if (text_.substr(pos_, 3) == "<->") {
        advance(3);
        out.push_back({Tok::kIff, "<->", line, col});
        continue;
      }
      if (text_.substr(pos_, 2) == "->") {
        advance(2);
        out.push_back({Tok::kImplies, "->", line, col});
        continue;
      }
      Tok kind;
      switch (c) {
        case '!': kind = Tok::kNot; break;
        case '&': kind = Tok::kAnd; break;
        case '|': kind = Tok::kOr; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance();
      out.push_back({kind, std::string(1, c), line, col});
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula parse() {
    Formula f = bicond();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().line, peek().column);
  }

  Formula bicond() {
    Formula lhs = impl();
    while (accept(Tok::kIff)) lhs = Formula::biconditional(lhs, impl());
    return lhs;
  }

  Formula impl() {
    Formula lhs = disj();
    if (accept(Tok::kImplies)) return Formula::implication(lhs, impl());
    return lhs;
  }

  Formula disj() {
    std::vector<Formula> parts{conj()};
    while (accept(Tok::kOr)) parts.push_back(conj());
    return Formula::disjunction(std::move(parts));
  }

  Formula conj() {
    std::vector<Formula> parts{unary()};
    while (accept(Tok::kAnd)) parts.push_back(unary());
    return Formula::conjunction(std::move(parts));
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::kNot:
        take();
        return Formula::negation(unary());
      case Tok::kLParen: {
        take();
        Formula inner = bicond();
        if (!accept(Tok::kRParen)) fail("expected ')'");
        return inner;
      }
      case Tok::kIdent: return Formula::var(take().text);
      case Tok::kTrue: take(); return Formula::constant(true);
      case Tok::kFalse: take(); return Formula::constant(false);
      case Tok::kEnd: fail("unexpected end of input");
      default: fail("unexpected '" + peek().text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(Lexer(text).run()).parse(); }

bool contains(std::span<const Formula> formulas, const Formula& f) {
  return std::find(formulas.begin(), formulas.end(), f) != formulas.end();
}

bool same_set(std::span<const Formula> a, std::span<const Formula> b) {
  return std::all_of(a.begin(), a.end(), [&](const Formula& f) { return contains(b, f); }) &&
         std::all_of(b.begin(), b.end(), [&](const Formula& f) { return contains(a, f); });
}

}  // namespace dynhs::logic
