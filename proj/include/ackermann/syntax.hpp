#pragma once

// Front end for sentences of the shape  exists z. forall x. exists y1 ... yn. psi
// where psi is a quantifier-free relational matrix with equality.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ack {

// {{{ Errors

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Lexical, Grammar, ArityConflict, NullaryRelation, Variable, Fragment };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(Format(line, column, message)), kind_(kind), line_(line), column_(column) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string Format(std::size_t line, std::size_t column, const std::string& message) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// The quantifier prefix is outside exists^{0|1} forall exists^*.
class FragmentError : public ParseError {
 public:
  FragmentError(std::size_t line, std::size_t column, const std::string& message)
      : ParseError(Kind::Fragment, line, column, message) {}
};

// }}}

// {{{ Signature

struct Relation {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Relation symbols of a sentence, ordered lexicographically by name.
/// Equality is never a member.
class Signature {
 public:
  Signature() = default;

  explicit Signature(const std::map<std::string, std::size_t>& arities) {
    for (const auto& [name, arity] : arities) {
      if (arity == 0) throw std::invalid_argument("relation " + name + " has arity 0");
      relations_.push_back({name, arity});
    }
  }

  std::size_t size() const { return relations_.size(); }
  bool empty() const { return relations_.empty(); }
  const Relation& operator[](std::size_t i) const { return relations_[i]; }
  auto begin() const { return relations_.begin(); }
  auto end() const { return relations_.end(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::lower_bound(relations_.begin(), relations_.end(), name,
                               [](const Relation& r, std::string_view n) { return r.name < n; });
    if (it == relations_.end() || it->name != name) return std::nullopt;
    return static_cast<std::size_t>(it - relations_.begin());
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (const auto& r : relations_) m = std::max(m, r.arity);
    return m;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Relation> relations_;
};

// }}}

// {{{ Matrix

/// Prefix variables are addressed by position: 0 is z, 1 is x, 2 + i is y_{i+1}.
inline constexpr std::size_t kVarZ = 0;
inline constexpr std::size_t kVarX = 1;

struct Atom {
  bool is_equality = false;
  std::size_t rel = 0;  // signature index; unused for equality
  std::vector<std::size_t> args;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

enum class Connective { Atom, Not, And, Or, Implies, Iff };

/// Kleene truth value used for evaluation under partial valuations.
enum class Tri : std::uint8_t { False, True, Unknown };

inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }

/// Quantifier-free formula stored as a node arena. Atoms are interned, so two
/// occurrences of the same atom share one atom index.
class Matrix {
 public:
  struct Node {
    Connective op = Connective::Atom;
    std::size_t atom = 0;
    int lhs = -1;
    int rhs = -1;
  };

  Matrix() = default;

  std::size_t add_atom(const Atom& a) {
    auto it = std::find(atoms_.begin(), atoms_.end(), a);
    std::size_t id = static_cast<std::size_t>(it - atoms_.begin());
    if (it == atoms_.end()) atoms_.push_back(a);
    nodes_.push_back({Connective::Atom, id, -1, -1});
    return nodes_.size() - 1;
  }

  std::size_t add_node(Connective op, int lhs, int rhs = -1) {
    nodes_.push_back({op, 0, lhs, rhs});
    return nodes_.size() - 1;
  }

  void set_root(std::size_t root) { root_ = static_cast<int>(root); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::vector<Atom>& mutable_atoms() { return atoms_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  /// Two-valued evaluation; `value(atom_id)` supplies atom truth.
  template <class AtomValue>
  bool evaluate(AtomValue&& value) const {
    return Eval(root_, value);
  }

  /// Kleene evaluation; `value(atom_id)` returns Tri.
  template <class AtomValue>
  Tri evaluate3(AtomValue&& value) const {
    return Eval3(root_, value);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return SameTree(a, a.root_, b, b.root_);
  }

 private:
  template <class AtomValue>
  bool Eval(int i, AtomValue& value) const {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Connective::Atom: return value(n.atom);
      case Connective::Not: return !Eval(n.lhs, value);
      case Connective::And: return Eval(n.lhs, value) && Eval(n.rhs, value);
      case Connective::Or: return Eval(n.lhs, value) || Eval(n.rhs, value);
      case Connective::Implies: return !Eval(n.lhs, value) || Eval(n.rhs, value);
      case Connective::Iff: return Eval(n.lhs, value) == Eval(n.rhs, value);
    }
    return false;
  }

  template <class AtomValue>
  Tri Eval3(int i, AtomValue& value) const {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Connective::Atom: return value(n.atom);
      case Connective::Not: return Negate(Eval3(n.lhs, value));
      case Connective::And: {
        Tri l = Eval3(n.lhs, value);
        if (l == Tri::False) return Tri::False;
        Tri r = Eval3(n.rhs, value);
        if (r == Tri::False) return Tri::False;
        return (l == Tri::True && r == Tri::True) ? Tri::True : Tri::Unknown;
      }
      case Connective::Or: {
        Tri l = Eval3(n.lhs, value);
        if (l == Tri::True) return Tri::True;
        Tri r = Eval3(n.rhs, value);
        if (r == Tri::True) return Tri::True;
        return (l == Tri::False && r == Tri::False) ? Tri::False : Tri::Unknown;
      }
      case Connective::Implies: {
        Tri l = Eval3(n.lhs, value);
        if (l == Tri::False) return Tri::True;
        Tri r = Eval3(n.rhs, value);
        if (r == Tri::True) return Tri::True;
        return (l == Tri::True && r == Tri::False) ? Tri::False : Tri::Unknown;
      }
      case Connective::Iff: {
        Tri l = Eval3(n.lhs, value);
        if (l == Tri::Unknown) return Tri::Unknown;
        Tri r = Eval3(n.rhs, value);
        if (r == Tri::Unknown) return Tri::Unknown;
        return tri(l == r);
      }
    }
    return Tri::Unknown;
  }

  static Tri Negate(Tri t) {
    if (t == Tri::Unknown) return t;
    return t == Tri::True ? Tri::False : Tri::True;
  }

  static bool SameTree(const Matrix& a, int i, const Matrix& b, int j) {
    if (i < 0 || j < 0) return i == j;
    const Node& n = a.nodes_[i];
    const Node& m = b.nodes_[j];
    if (n.op != m.op) return false;
    if (n.op == Connective::Atom) return a.atoms_[n.atom] == b.atoms_[m.atom];
    return SameTree(a, n.lhs, b, m.lhs) && SameTree(a, n.rhs, b, m.rhs);
  }

  std::vector<Atom> atoms_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// }}}

// {{{ Sentence

struct PrenexSentence {
  std::string z;
  std::string x;
  std::vector<std::string> ys;
  Matrix matrix;
  Signature signature;
  bool z_synthesized = false;

  std::size_t n() const { return ys.size(); }
  std::size_t variable_count() const { return ys.size() + 2; }

  const std::string& variable_name(std::size_t v) const {
    if (v == kVarZ) return z;
    if (v == kVarX) return x;
    return ys[v - 2];
  }

  // z_synthesized is bookkeeping about the input text, not part of the sentence.
  friend bool operator==(const PrenexSentence& a, const PrenexSentence& b) {
    return a.z == b.z && a.x == b.x && a.ys == b.ys && a.signature == b.signature &&
           a.matrix == b.matrix;
  }
};

struct Quantifier {
  bool existential = false;
  std::string var;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct PrefixShape {
  std::string z;
  std::string x;
  std::vector<std::string> ys;
  bool z_synthesized = false;
};

inline bool IsKeyword(std::string_view s) { return s == "exists" || s == "forall"; }

/// Accepts exists^{0|1} forall exists^*. A missing leading existential gets a
/// fresh variable name that does not clash with any prefix variable.
inline PrefixShape validate_prefix(const std::vector<Quantifier>& prefix) {
  std::set<std::string> seen;
  for (const auto& q : prefix) {
    if (!seen.insert(q.var).second)
      throw ParseError(ParseError::Kind::Variable, q.line, q.column,
                       "variable '" + q.var + "' is bound twice");
  }
  std::size_t universals = 0;
  std::size_t universal_at = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i].existential) continue;
    if (++universals == 2)
      throw FragmentError(prefix[i].line, prefix[i].column,
                          "prefix has two universal quantifiers; the fragment allows exactly one");
    universal_at = i;
  }
  if (universals == 0) {
    std::size_t line = prefix.empty() ? 1 : prefix.front().line;
    std::size_t col = prefix.empty() ? 1 : prefix.front().column;
    throw FragmentError(line, col, "prefix has no universal quantifier");
  }
  if (universal_at > 1)
    throw FragmentError(prefix[1].line, prefix[1].column,
                        "prefix has " + std::to_string(universal_at) +
                            " leading existentials; the fragment allows at most one");

  PrefixShape shape;
  shape.x = prefix[universal_at].var;
  for (std::size_t i = universal_at + 1; i < prefix.size(); ++i) shape.ys.push_back(prefix[i].var);
  if (universal_at == 1) {
    shape.z = prefix[0].var;
  } else {
    shape.z_synthesized = true;
    std::string candidate = "z";
    for (int k = 0; seen.count(candidate); ++k) candidate = "z" + std::to_string(k);
    shape.z = candidate;
  }
  return shape;
}

// }}}

// {{{ Lexer and parser

namespace detail {

struct Token {
  enum class Kind { Ident, LParen, RParen, Comma, Dot, Not, And, Or, Implies, Iff, Eq, Neq, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::vector<Token> Tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
    std::size_t len = 1;
    if (c == '(') t.kind = Token::Kind::LParen;
    else if (c == ')') t.kind = Token::Kind::RParen;
    else if (c == ',') t.kind = Token::Kind::Comma;
    else if (c == '.') t.kind = Token::Kind::Dot;
    else if (c == '~') t.kind = Token::Kind::Not;
    else if (c == '&') t.kind = Token::Kind::And;
    else if (c == '|') t.kind = Token::Kind::Or;
    else if (c == '=') t.kind = Token::Kind::Eq;
    else if (starts("->")) t.kind = Token::Kind::Implies, len = 2;
    else if (starts("<->")) t.kind = Token::Kind::Iff, len = 3;
    else if (starts("!=")) t.kind = Token::Kind::Neq, len = 2;
    else
      throw ParseError(ParseError::Kind::Lexical, line, col,
                       std::string("unexpected character '") + c + "'");
    t.text = std::string(src.substr(i, len));
    advance(len);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  PrenexSentence Run() {
    std::vector<Quantifier> prefix;
    while (Peek().kind == Token::Kind::Ident && IsKeyword(Peek().text)) {
      Token kw = Next();
      bool existential = kw.text == "exists";
      bool any = false;
      while (Peek().kind == Token::Kind::Ident) {
        Token v = Next();
        CheckVariableName(v);
        prefix.push_back({existential, v.text, v.line, v.column});
        any = true;
      }
      if (!any) Fail(Peek(), "expected a variable after '" + kw.text + "'");
      Expect(Token::Kind::Dot, "'.' after quantified variables");
    }
    PrefixShape shape = validate_prefix(prefix);
    vars_[shape.z] = kVarZ;
    vars_[shape.x] = kVarX;
    for (std::size_t i = 0; i < shape.ys.size(); ++i) vars_[shape.ys[i]] = i + 2;

    std::size_t root = ParseIff();
    if (Peek().kind != Token::Kind::End) Fail(Peek(), "unexpected '" + Peek().text + "'");
    matrix_.set_root(root);

    PrenexSentence s;
    s.z = shape.z;
    s.x = shape.x;
    s.ys = shape.ys;
    s.z_synthesized = shape.z_synthesized;
    std::map<std::string, std::size_t> arities;
    for (const auto& [name, info] : arity_) arities[name] = info.arity;
    s.signature = Signature(arities);
    for (auto& a : matrix_.mutable_atoms()) {
      if (!a.is_equality) a.rel = *s.signature.index_of(rel_names_[a.rel]);
    }
    s.matrix = std::move(matrix_);
    return s;
  }

 private:
  struct ArityInfo {
    std::size_t arity;
    std::size_t line, column;
  };

  const Token& Peek() const { return toks_[pos_]; }
  Token Next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void Fail(const Token& t, const std::string& msg) {
    throw ParseError(ParseError::Kind::Grammar, t.line, t.column, msg);
  }

  void Expect(Token::Kind k, const std::string& what) {
    if (Peek().kind != k) {
      const Token& t = Peek();
      Fail(t, "expected " + what + ", got " + (t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"));
    }
    Next();
  }

  static void CheckVariableName(const Token& t) {
    if (IsKeyword(t.text)) Fail(t, "keyword '" + t.text + "' used as a variable");
    if (!std::islower(static_cast<unsigned char>(t.text[0])))
      Fail(t, "variables must start with a lowercase letter: '" + t.text + "'");
  }

  std::size_t ParseIff() {
    std::size_t lhs = ParseImp();
    while (Peek().kind == Token::Kind::Iff) {
      Next();
      std::size_t rhs = ParseImp();
      lhs = matrix_.add_node(Connective::Iff, static_cast<int>(lhs), static_cast<int>(rhs));
    }
    return lhs;
  }

  // Implication associates to the right.
  std::size_t ParseImp() {
    std::size_t lhs = ParseDisj();
    if (Peek().kind == Token::Kind::Implies) {
      Next();
      std::size_t rhs = ParseImp();
      return matrix_.add_node(Connective::Implies, static_cast<int>(lhs), static_cast<int>(rhs));
    }
    return lhs;
  }

  std::size_t ParseDisj() {
    std::size_t lhs = ParseConj();
    while (Peek().kind == Token::Kind::Or) {
      Next();
      std::size_t rhs = ParseConj();
      lhs = matrix_.add_node(Connective::Or, static_cast<int>(lhs), static_cast<int>(rhs));
    }
    return lhs;
  }

  std::size_t ParseConj() {
    std::size_t lhs = ParseLit();
    while (Peek().kind == Token::Kind::And) {
      Next();
      std::size_t rhs = ParseLit();
      lhs = matrix_.add_node(Connective::And, static_cast<int>(lhs), static_cast<int>(rhs));
    }
    return lhs;
  }

  std::size_t ParseLit() {
    const Token& t = Peek();
    if (t.kind == Token::Kind::Not) {
      Next();
      std::size_t inner = ParseLit();
      return matrix_.add_node(Connective::Not, static_cast<int>(inner));
    }
    if (t.kind == Token::Kind::LParen) {
      Next();
      std::size_t inner = ParseIff();
      Expect(Token::Kind::RParen, "')'");
      return inner;
    }
    if (t.kind == Token::Kind::Ident) return ParseAtom();
    Fail(t, t.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  std::size_t ParseAtom() {
    Token head = Next();
    if (IsKeyword(head.text))
      throw FragmentError(head.line, head.column,
                          "quantifier inside the matrix; the matrix must be quantifier-free");
    if (std::isupper(static_cast<unsigned char>(head.text[0]))) {
      if (Peek().kind != Token::Kind::LParen ||
          toks_[pos_ + 1].kind == Token::Kind::RParen)
        throw ParseError(ParseError::Kind::NullaryRelation, head.line, head.column,
                         "nullary relation '" + head.text + "' is not supported");
      Next();
      Atom a;
      for (;;) {
        a.args.push_back(ParseVariableRef());
        if (Peek().kind == Token::Kind::Comma) {
          Next();
          continue;
        }
        Expect(Token::Kind::RParen, "',' or ')' in argument list");
        break;
      }
      NoteArity(head, a.args.size());
      a.rel = RelSlot(head.text);
      return matrix_.add_atom(a);
    }
    if (Peek().kind == Token::Kind::LParen)
      Fail(head, "function symbol '" + head.text + "' is not supported");
    std::size_t lhs = LookupVariable(head);
    bool negated = false;
    if (Peek().kind == Token::Kind::Neq) {
      negated = true;
    } else if (Peek().kind != Token::Kind::Eq) {
      Fail(Peek(), "expected '=' or '!=' after variable '" + head.text + "'");
    }
    Next();
    std::size_t rhs = ParseVariableRef();
    Atom a;
    a.is_equality = true;
    a.args = {lhs, rhs};
    std::size_t node = matrix_.add_atom(a);
    if (negated) node = matrix_.add_node(Connective::Not, static_cast<int>(node));
    return node;
  }

  std::size_t ParseVariableRef() {
    Token t = Next();
    if (t.kind != Token::Kind::Ident) Fail(t, "expected a variable");
    if (std::isupper(static_cast<unsigned char>(t.text[0])))
      Fail(t, "constant '" + t.text + "' is not supported; arguments must be variables");
    if (Peek().kind == Token::Kind::LParen)
      Fail(t, "function symbol '" + t.text + "' is not supported");
    return LookupVariable(t);
  }

  std::size_t LookupVariable(const Token& t) {
    if (IsKeyword(t.text)) Fail(t, "keyword '" + t.text + "' used as a variable");
    auto it = vars_.find(t.text);
    if (it == vars_.end())
      throw ParseError(ParseError::Kind::Variable, t.line, t.column,
                       "variable '" + t.text + "' is not bound by the prefix");
    return it->second;
  }

  void NoteArity(const Token& head, std::size_t arity) {
    auto [it, fresh] = arity_.emplace(head.text, ArityInfo{arity, head.line, head.column});
    if (!fresh && it->second.arity != arity)
      throw ParseError(ParseError::Kind::ArityConflict, head.line, head.column,
                       "relation '" + head.text + "' used with arity " + std::to_string(arity) +
                           " but earlier with arity " + std::to_string(it->second.arity) +
                           " (at " + std::to_string(it->second.line) + ":" +
                           std::to_string(it->second.column) + ")");
  }

  std::size_t RelSlot(const std::string& name) {
    auto it = std::find(rel_names_.begin(), rel_names_.end(), name);
    if (it != rel_names_.end()) return static_cast<std::size_t>(it - rel_names_.begin());
    rel_names_.push_back(name);
    return rel_names_.size() - 1;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> vars_;
  std::map<std::string, ArityInfo> arity_;
  std::vector<std::string> rel_names_;
  Matrix matrix_;
};

}  // namespace detail

inline PrenexSentence parse(std::string_view text) {
  return detail::Parser(detail::Tokenize(text)).Run();
}

// }}}

// {{{ Printing

namespace detail {

inline void PrintNode(const PrenexSentence& s, int i, std::string& out) {
  const Matrix::Node& n = s.matrix.nodes()[i];
  if (n.op == Connective::Atom) {
    const Atom& a = s.matrix.atoms()[n.atom];
    if (a.is_equality) {
      out += "(" + s.variable_name(a.args[0]) + " = " + s.variable_name(a.args[1]) + ")";
      return;
    }
    out += s.signature[a.rel].name + "(";
    for (std::size_t k = 0; k < a.args.size(); ++k) {
      if (k) out += ",";
      out += s.variable_name(a.args[k]);
    }
    out += ")";
    return;
  }
  if (n.op == Connective::Not) {
    out += "(~";
    PrintNode(s, n.lhs, out);
    out += ")";
    return;
  }
  const char* op = n.op == Connective::And       ? " & "
                   : n.op == Connective::Or      ? " | "
                   : n.op == Connective::Implies ? " -> "
                                                 : " <-> ";
  out += "(";
  PrintNode(s, n.lhs, out);
  out += op;
  PrintNode(s, n.rhs, out);
  out += ")";
}

}  // namespace detail

inline std::string print_matrix(const PrenexSentence& s) {
  std::string out;
  detail::PrintNode(s, s.matrix.root(), out);
  return out;
}

/// Canonical form: every quantifier spelled out (including a synthesized z)
/// and a fully parenthesized matrix.
inline std::string print(const PrenexSentence& s) {
  std::string out = "exists " + s.z + ". forall " + s.x + ". ";
  for (const auto& y : s.ys) out += "exists " + y + ". ";
  return out + print_matrix(s);
}

inline Signature extract_signature(const PrenexSentence& s) {
  std::map<std::string, std::size_t> arities;
  for (const auto& a : s.matrix.atoms()) {
    if (!a.is_equality) arities[s.signature[a.rel].name] = a.args.size();
  }
  return Signature(arities);
}

// }}}

}  // namespace ack
