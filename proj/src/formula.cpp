#include "hypermon/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace hypermon {

namespace {
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
  return a;
}
}  // namespace

std::uint32_t FormulaArena::intern_ap(const std::string& s) {
  auto it = ap_index_.find(s);
  if (it != ap_index_.end()) return it->second;
  std::uint32_t i = static_cast<std::uint32_t>(ap_names_.size());
  ap_names_.push_back(s);
  ap_index_.emplace(s, i);
  return i;
}

std::uint32_t FormulaArena::intern_var(const std::string& s) {
  auto it = var_index_.find(s);
  if (it != var_index_.end()) return it->second;
  std::uint32_t i = static_cast<std::uint32_t>(var_names_.size());
  var_names_.push_back(s);
  var_index_.emplace(s, i);
  return i;
}

FormulaId FormulaArena::atom(const std::string& ap, const std::string& var) {
  FormulaNode n{Op::Atom};
  n.ap = intern_ap(ap);
  n.var = intern_var(var);
  return intern(n);
}

FormulaId FormulaArena::bounded_globally(std::uint32_t k, FormulaId a) {
  FormulaNode n{Op::BoundedGlobally};
  n.kid[0] = a;
  n.bound = k;
  return intern(n);
}

FormulaId FormulaArena::intern(FormulaNode n) {
  std::uint64_t key = mix(mix(static_cast<std::uint64_t>(n.op), mix(n.ap, n.var)),
                          mix(mix(n.kid[0], n.kid[1]), n.bound));
  auto& bucket = intern_[key];
  for (FormulaId id : bucket) {
    const FormulaNode& m = nodes_[id];
    if (m.op == n.op && m.ap == n.ap && m.var == n.var && m.kid[0] == n.kid[0] &&
        m.kid[1] == n.kid[1] && m.bound == n.bound)
      return id;
  }
  FormulaId id = static_cast<FormulaId>(nodes_.size());
  nodes_.push_back(n);
  bucket.push_back(id);
  return id;
}

IndexedAtom FormulaArena::atom_of(FormulaId id) const {
  const FormulaNode& n = nodes_[id];
  return IndexedAtom{ap_names_[n.ap], TraceVariable{var_names_[n.var]}};
}

bool QuantifiedFormula::alternation_free() const {
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i].first != prefix[0].first) return false;
  return true;
}

std::size_t QuantifiedFormula::first_block() const {
  std::size_t i = 1;
  while (i < prefix.size() && prefix[i].first == prefix[0].first) ++i;
  return prefix.empty() ? 0 : i;
}

PrefixShape QuantifiedFormula::shape() const {
  if (alternation_free())
    return (prefix.empty() || prefix[0].first == Quantifier::Forall) ? PrefixShape::ForallOnly
                                                                     : PrefixShape::ExistsOnly;
  std::size_t n = first_block();
  for (std::size_t i = n + 1; i < prefix.size(); ++i)
    if (prefix[i].first != prefix[n].first) return PrefixShape::Other;
  return prefix[0].first == Quantifier::Forall ? PrefixShape::ForallExists
                                               : PrefixShape::ExistsForall;
}

std::vector<TraceVariable> QuantifiedFormula::variables() const {
  std::vector<TraceVariable> out;
  out.reserve(prefix.size());
  for (auto& [q, v] : prefix) out.push_back(v);
  return out;
}

// --- parser -----------------------------------------------------------------

namespace {

enum class Tok {
  End,
  Ident,
  Forall,
  Exists,
  True,
  False,
  Dot,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Bang,
  Amp,
  Pipe,
  Arrow,
  DArrow,
  OpU,
  OpW,
  OpX,
  OpG,
  OpF,
  Less,
  Nat,
};

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t nat = 0;
  std::size_t line, col;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<std::string>* declared_aps)
      : src_(src), declared_(declared_aps) {}

  Token next() {
    skip_space();
    std::size_t l = line_, c = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", 0, l, c};
    char ch = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::uint64_t v = 0;
      std::string t;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        v = v * 10 + static_cast<std::uint64_t>(src_[pos_] - '0');
        t += src_[pos_];
        advance();
      }
      return {Tok::Nat, t, v, l, c};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string t;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
              src_[pos_] == '\'')) {
        t += src_[pos_];
        advance();
      }
      if (t == "forall") return {Tok::Forall, t, 0, l, c};
      if (t == "exists") return {Tok::Exists, t, 0, l, c};
      if (t == "true") return {Tok::True, t, 0, l, c};
      if (t == "false") return {Tok::False, t, 0, l, c};
      if (t == "U") return {Tok::OpU, t, 0, l, c};
      if (t == "W") return {Tok::OpW, t, 0, l, c};
      if (t == "X") return {Tok::OpX, t, 0, l, c};
      if (t == "G") return {Tok::OpG, t, 0, l, c};
      if (t == "F") return {Tok::OpF, t, 0, l, c};
      return {Tok::Ident, t, 0, l, c};
    }
    switch (ch) {
      case '.': advance(); return {Tok::Dot, ".", 0, l, c};
      case '(': advance(); return {Tok::LParen, "(", 0, l, c};
      case ')': advance(); return {Tok::RParen, ")", 0, l, c};
      case '[': advance(); return {Tok::LBracket, "[", 0, l, c};
      case ']': advance(); return {Tok::RBracket, "]", 0, l, c};
      case '!': advance(); return {Tok::Bang, "!", 0, l, c};
      case '&': advance(); return {Tok::Amp, "&", 0, l, c};
      case '|': advance(); return {Tok::Pipe, "|", 0, l, c};
      case '<':
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' && src_[pos_ + 2] == '>') {
          advance(); advance(); advance();
          return {Tok::DArrow, "<->", 0, l, c};
        }
        advance();
        return {Tok::Less, "<", 0, l, c};
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          advance(); advance();
          return {Tok::Arrow, "->", 0, l, c};
        }
        break;
      default: break;
    }
    throw ParseError(ParseError::Kind::Syntax,
                     "unexpected character '" + std::string(1, ch) + "' at " + pos_str(l, c), l, c);
  }

  static std::string pos_str(std::size_t l, std::size_t c) {
    return "line " + std::to_string(l) + ", column " + std::to_string(c);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (pos_ < src_.size() && src_[pos_] == '#') {
        // `#ap a b c` declares the proposition set; any other `#` line is a comment.
        std::size_t start = pos_;
        std::string line;
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          line += src_[pos_];
          advance();
        }
        (void)start;
        if (declared_ && line.rfind("#ap", 0) == 0 &&
            (line.size() == 3 || std::isspace(static_cast<unsigned char>(line[3])))) {
          std::istringstream iss(line.substr(3));
          std::string w;
          while (iss >> w) declared_->push_back(w);
        }
        continue;
      }
      break;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  std::vector<std::string>* declared_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src, &declared_aps_) { bump(); }

  QuantifiedFormula parse() {
    QuantifiedFormula phi;
    phi.arena = std::make_shared<FormulaArena>();
    std::set<std::string> seen;
    while (cur_.kind == Tok::Forall || cur_.kind == Tok::Exists) {
      Quantifier q = cur_.kind == Tok::Forall ? Quantifier::Forall : Quantifier::Exists;
      bump();
      Token name = expect(Tok::Ident, "trace variable name");
      if (!seen.insert(name.text).second)
        throw ParseError(ParseError::Kind::DuplicateVariable,
                         "duplicate trace variable '" + name.text + "' at " +
                             Lexer::pos_str(name.line, name.col),
                         name.line, name.col);
      expect(Tok::Dot, "'.'");
      phi.prefix.emplace_back(q, TraceVariable{name.text});
    }
    phi.body = parse_expr(*phi.arena, 0);
    if (cur_.kind != Tok::End)
      throw ParseError(ParseError::Kind::Syntax,
                       "trailing input at " + Lexer::pos_str(cur_.line, cur_.col), cur_.line,
                       cur_.col);
    // Scope check and AP collection.
    std::set<std::string> bound;
    for (auto& [q, v] : phi.prefix) bound.insert(v.name);
    std::set<std::string> mentioned;
    for (const IndexedAtom& a : collect_atoms(*phi.arena, phi.body)) {
      if (!bound.count(a.var.name))
        throw ParseError(ParseError::Kind::UnboundVariable,
                         "unbound trace variable '" + a.var.name + "'", 0, 0);
      mentioned.insert(a.ap);
    }
    if (!declared_aps_.empty()) {
      std::set<std::string> declared(declared_aps_.begin(), declared_aps_.end());
      for (const std::string& ap : mentioned)
        if (!declared.count(ap))
          throw ParseError(ParseError::Kind::Syntax,
                           "atom '" + ap + "' not in declared #ap set", 0, 0);
      phi.ap_set.assign(declared.begin(), declared.end());
    } else {
      phi.ap_set.assign(mentioned.begin(), mentioned.end());
    }
    return phi;
  }

 private:
  struct OpInfo {
    int prec;
    bool right;
  };

  static bool binop(Tok t, OpInfo& info) {
    switch (t) {
      case Tok::DArrow: info = {1, false}; return true;
      case Tok::Arrow: info = {2, true}; return true;
      case Tok::Pipe: info = {3, false}; return true;
      case Tok::Amp: info = {4, false}; return true;
      case Tok::OpU:
      case Tok::OpW: info = {5, true}; return true;
      default: return false;
    }
  }

  FormulaId parse_expr(FormulaArena& ar, int min_prec) {
    FormulaId lhs = parse_unary(ar);
    OpInfo info;
    while (binop(cur_.kind, info) && info.prec >= min_prec) {
      Tok op = cur_.kind;
      bump();
      FormulaId rhs = parse_expr(ar, info.right ? info.prec : info.prec + 1);
      switch (op) {
        case Tok::DArrow: lhs = ar.iff(lhs, rhs); break;
        case Tok::Arrow: lhs = ar.implies(lhs, rhs); break;
        case Tok::Pipe: lhs = ar.or_(lhs, rhs); break;
        case Tok::Amp: lhs = ar.and_(lhs, rhs); break;
        case Tok::OpU: lhs = ar.until(lhs, rhs); break;
        case Tok::OpW: lhs = ar.weak_until(lhs, rhs); break;
        default: break;
      }
    }
    return lhs;
  }

  FormulaId parse_unary(FormulaArena& ar) {
    switch (cur_.kind) {
      case Tok::True: bump(); return ar.truth(true);
      case Tok::False: bump(); return ar.truth(false);
      case Tok::Bang: bump(); return ar.not_(parse_unary(ar));
      case Tok::OpX: bump(); return ar.next(parse_unary(ar));
      case Tok::OpF: bump(); return ar.finally_(parse_unary(ar));
      case Tok::OpG: {
        bump();
        if (cur_.kind == Tok::LBracket) {
          bump();
          expect(Tok::Less, "'<'");
          Token n = expect(Tok::Nat, "step count");
          expect(Tok::RBracket, "']'");
          return ar.bounded_globally(static_cast<std::uint32_t>(n.nat), parse_unary(ar));
        }
        return ar.globally(parse_unary(ar));
      }
      case Tok::LParen: {
        bump();
        FormulaId e = parse_expr(ar, 0);
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        Token ap = cur_;
        bump();
        expect(Tok::LBracket, "'[' after atomic proposition");
        Token v = expect(Tok::Ident, "trace variable");
        expect(Tok::RBracket, "']'");
        return ar.atom(ap.text, v.text);
      }
      default:
        throw ParseError(ParseError::Kind::Syntax,
                         "unexpected token '" + cur_.text + "' at " +
                             Lexer::pos_str(cur_.line, cur_.col),
                         cur_.line, cur_.col);
    }
  }

  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind)
      throw ParseError(ParseError::Kind::Syntax,
                       "expected " + what + " at " + Lexer::pos_str(cur_.line, cur_.col),
                       cur_.line, cur_.col);
    Token t = cur_;
    bump();
    return t;
  }

  void bump() { cur_ = lex_.next(); }

  std::vector<std::string> declared_aps_;
  Lexer lex_;
  Token cur_{};
};

}  // namespace

QuantifiedFormula parse_formula(std::string_view text) { return Parser(text).parse(); }

// --- printing ---------------------------------------------------------------

namespace {

int print_prec(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Until:
    case Op::WeakUntil: return 5;
    default: return 6;  // atoms, constants, unary
  }
}

void print_rec(const FormulaArena& ar, FormulaId id, int min_prec, std::string& out) {
  const FormulaNode& n = ar.node(id);
  int p = print_prec(n.op);
  bool paren = p < min_prec;
  if (paren) out += "(";
  switch (n.op) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom:
      out += ar.ap_name(n.ap);
      out += "[";
      out += ar.var_name(n.var);
      out += "]";
      break;
    case Op::Not:
      out += "!";
      print_rec(ar, n.kid[0], 6, out);
      break;
    case Op::Next:
      out += "X ";
      print_rec(ar, n.kid[0], 6, out);
      break;
    case Op::Globally:
      out += "G ";
      print_rec(ar, n.kid[0], 6, out);
      break;
    case Op::Finally:
      out += "F ";
      print_rec(ar, n.kid[0], 6, out);
      break;
    case Op::BoundedGlobally:
      out += "G[<" + std::to_string(n.bound) + "] ";
      print_rec(ar, n.kid[0], 6, out);
      break;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Until:
    case Op::WeakUntil: {
      const char* sym = n.op == Op::And       ? " & "
                        : n.op == Op::Or      ? " | "
                        : n.op == Op::Implies ? " -> "
                        : n.op == Op::Iff     ? " <-> "
                        : n.op == Op::Until   ? " U "
                                              : " W ";
      bool right = n.op == Op::Implies || n.op == Op::Until || n.op == Op::WeakUntil;
      print_rec(ar, n.kid[0], right ? p + 1 : p, out);
      out += sym;
      print_rec(ar, n.kid[1], right ? p : p + 1, out);
      break;
    }
  }
  if (paren) out += ")";
}

}  // namespace

std::string print_expr(const FormulaArena& arena, FormulaId id) {
  std::string out;
  print_rec(arena, id, 0, out);
  return out;
}

std::string print_formula(const QuantifiedFormula& phi) {
  std::string out;
  for (auto& [q, v] : phi.prefix) {
    out += q == Quantifier::Forall ? "forall " : "exists ";
    out += v.name;
    out += ". ";
  }
  out += print_expr(*phi.arena, phi.body);
  return out;
}

// --- desugaring ---------------------------------------------------------------

FormulaId desugar(FormulaArena& ar, FormulaId id) {
  const FormulaNode n = ar.node(id);
  switch (n.op) {
    case Op::True:
    case Op::Atom: return id;
    case Op::False: return ar.not_(ar.truth(true));
    case Op::Not: return ar.not_(desugar(ar, n.kid[0]));
    case Op::Or: return ar.or_(desugar(ar, n.kid[0]), desugar(ar, n.kid[1]));
    case Op::Next: return ar.next(desugar(ar, n.kid[0]));
    case Op::Until: return ar.until(desugar(ar, n.kid[0]), desugar(ar, n.kid[1]));
    case Op::And: {
      FormulaId a = desugar(ar, n.kid[0]), b = desugar(ar, n.kid[1]);
      return ar.not_(ar.or_(ar.not_(a), ar.not_(b)));
    }
    case Op::Implies: {
      FormulaId a = desugar(ar, n.kid[0]), b = desugar(ar, n.kid[1]);
      return ar.or_(ar.not_(a), b);
    }
    case Op::Iff: {
      FormulaId a = desugar(ar, n.kid[0]), b = desugar(ar, n.kid[1]);
      FormulaId ab = ar.or_(ar.not_(a), b);
      FormulaId ba = ar.or_(ar.not_(b), a);
      return ar.not_(ar.or_(ar.not_(ab), ar.not_(ba)));
    }
    case Op::Finally: return ar.until(ar.truth(true), desugar(ar, n.kid[0]));
    case Op::Globally:
      return ar.not_(ar.until(ar.truth(true), ar.not_(desugar(ar, n.kid[0]))));
    case Op::WeakUntil: {
      FormulaId a = desugar(ar, n.kid[0]), b = desugar(ar, n.kid[1]);
      FormulaId g = ar.not_(ar.until(ar.truth(true), ar.not_(a)));
      return ar.or_(ar.until(a, b), g);
    }
    case Op::BoundedGlobally: {
      if (n.bound == 0) return ar.truth(true);
      FormulaId a = desugar(ar, n.kid[0]);
      FormulaId rest = desugar(ar, ar.bounded_globally(n.bound - 1, n.kid[0]));
      // a & X rest, conjunction by De Morgan
      return ar.not_(ar.or_(ar.not_(a), ar.not_(ar.next(rest))));
    }
  }
  return id;
}

bool is_core(const FormulaArena& ar, FormulaId id) {
  const FormulaNode& n = ar.node(id);
  switch (n.op) {
    case Op::True:
    case Op::Atom: return true;
    case Op::Not:
    case Op::Next: return is_core(ar, n.kid[0]);
    case Op::Or:
    case Op::Until: return is_core(ar, n.kid[0]) && is_core(ar, n.kid[1]);
    default: return false;
  }
}

FormulaId substitute_variables(FormulaArena& ar, FormulaId id,
                               const std::map<TraceVariable, TraceVariable>& map) {
  const FormulaNode n = ar.node(id);
  if (n.op == Op::Atom) {
    TraceVariable v{ar.var_name(n.var)};
    auto it = map.find(v);
    if (it == map.end()) throw UnmappedVariable(v.name);
    return ar.atom(ar.ap_name(n.ap), it->second.name);
  }
  FormulaNode out = n;
  if (n.kid[0] != kNoFormula) out.kid[0] = substitute_variables(ar, n.kid[0], map);
  if (n.kid[1] != kNoFormula) out.kid[1] = substitute_variables(ar, n.kid[1], map);
  if (out.kid[0] == n.kid[0] && out.kid[1] == n.kid[1]) return id;
  switch (n.op) {
    case Op::Not: return ar.not_(out.kid[0]);
    case Op::And: return ar.and_(out.kid[0], out.kid[1]);
    case Op::Or: return ar.or_(out.kid[0], out.kid[1]);
    case Op::Implies: return ar.implies(out.kid[0], out.kid[1]);
    case Op::Iff: return ar.iff(out.kid[0], out.kid[1]);
    case Op::Next: return ar.next(out.kid[0]);
    case Op::Until: return ar.until(out.kid[0], out.kid[1]);
    case Op::WeakUntil: return ar.weak_until(out.kid[0], out.kid[1]);
    case Op::Globally: return ar.globally(out.kid[0]);
    case Op::Finally: return ar.finally_(out.kid[0]);
    case Op::BoundedGlobally: return ar.bounded_globally(n.bound, out.kid[0]);
    default: return id;
  }
}

bool equal_exprs(const FormulaArena& a, FormulaId ia, const FormulaArena& b, FormulaId ib) {
  const FormulaNode& na = a.node(ia);
  const FormulaNode& nb = b.node(ib);
  if (na.op != nb.op || na.bound != nb.bound) return false;
  if (na.op == Op::Atom)
    return a.ap_name(na.ap) == b.ap_name(nb.ap) && a.var_name(na.var) == b.var_name(nb.var);
  for (int i = 0; i < 2; ++i) {
    bool ha = na.kid[i] != kNoFormula, hb = nb.kid[i] != kNoFormula;
    if (ha != hb) return false;
    if (ha && !equal_exprs(a, na.kid[i], b, nb.kid[i])) return false;
  }
  return true;
}

std::vector<IndexedAtom> collect_atoms(const FormulaArena& ar, FormulaId id) {
  std::set<IndexedAtom> seen;
  std::function<void(FormulaId)> go = [&](FormulaId f) {
    const FormulaNode& n = ar.node(f);
    if (n.op == Op::Atom) {
      seen.insert(ar.atom_of(f));
      return;
    }
    if (n.kid[0] != kNoFormula) go(n.kid[0]);
    if (n.kid[1] != kNoFormula) go(n.kid[1]);
  };
  go(id);
  return {seen.begin(), seen.end()};
}

std::vector<TraceVariable> collect_variables(const FormulaArena& ar, FormulaId id) {
  std::vector<TraceVariable> out;
  std::set<std::string> seen;
  std::function<void(FormulaId)> go = [&](FormulaId f) {
    const FormulaNode& n = ar.node(f);
    if (n.op == Op::Atom) {
      std::string v = ar.var_name(n.var);
      if (seen.insert(v).second) out.push_back(TraceVariable{v});
      return;
    }
    if (n.kid[0] != kNoFormula) go(n.kid[0]);
    if (n.kid[1] != kNoFormula) go(n.kid[1]);
  };
  go(id);
  return out;
}

}  // namespace hypermon
