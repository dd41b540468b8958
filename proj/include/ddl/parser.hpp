// ============================================================================
// ddl/parser.hpp — Text DSL front end and serializers
// ============================================================================
//
// Statement grammar (one statement per line, `#` starts a comment):
//
//   fact   := "fact" item "."
//   item   := lit | "O(" lit ")" | "P(" lit ")" | "!O(" lit ")" | "!P(" lit ")"
//   lit    := ["~"] IDENT
//   rule   := "rule" LABEL ":" [item ("," item)*] arrow chain "."
//   arrow  := "=>O" | "=>P" | "~>"
//   chain  := lit (("(x)" | "(o)") lit)*
//   sup    := "sup" LABEL ">" LABEL "."
//
// "(x)" is the reparation connective, "(o)" the ordered-permission one; the
// Unicode spellings ⊗ / ⊙ are accepted on input, ASCII is emitted on output.
// "!O(l)" is the outer-negated modal literal, distinct from "O(~l)".
//
// The parser is total over arbitrary bytes: every rejection is a ParseError
// with a source span; it never throws on malformed input.
//
// ============================================================================

#ifndef DDL_PARSER_HPP
#define DDL_PARSER_HPP

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ddl/model.hpp"

namespace ddl {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 1;
};

struct ParseError {
  enum class Kind { Syntax, DuplicateLabel, MalformedChain, UnknownLabelInSup, NestedModality };
  SourceSpan span;
  std::string message;
  Kind kind = Kind::Syntax;
};

inline const char* parse_error_kind_name(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::Syntax: return "syntax";
    case ParseError::Kind::DuplicateLabel: return "duplicate-label";
    case ParseError::Kind::MalformedChain: return "malformed-chain";
    case ParseError::Kind::UnknownLabelInSup: return "unknown-label-in-sup";
    case ParseError::Kind::NestedModality: return "nested-modality";
  }
  return "syntax";
}

struct ParseResult {
  std::optional<Theory> theory;  // engaged iff errors is empty
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

namespace detail {

// Cursor over a single source line.
struct LineCursor {
  std::string_view text;
  int line = 1;
  std::size_t pos = 0;

  bool at_end() const { return pos >= text.size(); }
  char peek(std::size_t off = 0) const {
    return pos + off < text.size() ? text[pos + off] : '\0';
  }
  void skip_ws() {
    while (!at_end() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  }
  int col() const { return static_cast<int>(pos) + 1; }
  SourceSpan span_here(int len = 1) const { return SourceSpan{line, col(), len}; }

  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  bool eat_str(std::string_view s) {
    if (text.substr(pos, s.size()) == s) { pos += s.size(); return true; }
    return false;
  }
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::optional<std::string> lex_ident(LineCursor& cur) {
  cur.skip_ws();
  if (!ident_start(cur.peek())) return std::nullopt;
  std::size_t start = cur.pos;
  while (ident_char(cur.peek())) ++cur.pos;
  return std::string(cur.text.substr(start, cur.pos - start));
}

}  // namespace detail

/// Parses "lit" syntax ("~a" or "a") against an existing symbol table.
/// Used by the CLI to read query literals; atoms are interned on demand.
inline std::optional<Lit> parse_literal_string(std::string_view s, SymbolTable& syms) {
  detail::LineCursor cur{s};
  cur.skip_ws();
  bool positive = !cur.eat('~');
  auto name = detail::lex_ident(cur);
  if (!name) return std::nullopt;
  cur.skip_ws();
  if (!cur.at_end()) return std::nullopt;
  return Lit{syms.intern(*name), positive};
}

class TheoryParser {
public:
  ParseResult parse(std::string_view text) {
    result_ = ParseResult{};
    theory_ = Theory{};
    pending_sup_.clear();
    seen_labels_.clear();

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t nl = text.find('\n', start);
      std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                              : nl - start);
      ++line_no;
      parse_line(line, line_no);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }

    // sup labels may forward-reference rules, so resolve at the end
    for (const auto& [winner, loser, span] : pending_sup_) {
      bool bad = false;
      if (!seen_labels_.count(winner)) {
        error(span, "unknown rule label '" + winner + "' in sup", ParseError::Kind::UnknownLabelInSup);
        bad = true;
      }
      if (!seen_labels_.count(loser)) {
        error(span, "unknown rule label '" + loser + "' in sup", ParseError::Kind::UnknownLabelInSup);
        bad = true;
      }
      if (!bad) theory_.sup.pairs.insert({winner, loser});
    }

    if (result_.errors.empty()) {
      std::sort(theory_.facts.begin(), theory_.facts.end());
      theory_.facts.erase(std::unique(theory_.facts.begin(), theory_.facts.end()),
                          theory_.facts.end());
      result_.theory = std::move(theory_);
    }
    return std::move(result_);
  }

private:
  using LineCursor = detail::LineCursor;

  ParseResult result_;
  Theory theory_;
  std::vector<std::tuple<std::string, std::string, SourceSpan>> pending_sup_;
  std::set<std::string> seen_labels_;

  void error(SourceSpan span, std::string msg, ParseError::Kind kind = ParseError::Kind::Syntax) {
    result_.errors.push_back(ParseError{span, std::move(msg), kind});
  }

  void parse_line(std::string_view raw, int line_no) {
    // strip comment
    std::size_t hash = raw.find('#');
    std::string_view line = hash == std::string_view::npos ? raw : raw.substr(0, hash);
    LineCursor cur{line, line_no};
    cur.skip_ws();
    if (cur.at_end()) return;

    auto kw = detail::lex_ident(cur);
    if (!kw) {
      error(cur.span_here(), "expected 'fact', 'rule' or 'sup'");
      return;
    }
    if (*kw == "fact") parse_fact(cur);
    else if (*kw == "rule") parse_rule(cur);
    else if (*kw == "sup") parse_sup(cur);
    else error(SourceSpan{line_no, cur.col() - static_cast<int>(kw->size()),
                          static_cast<int>(kw->size())},
               "unknown statement keyword '" + *kw + "'");
  }

  bool expect_period(LineCursor& cur) {
    cur.skip_ws();
    if (!cur.eat('.')) {
      error(cur.span_here(), "expected '.' to end the statement");
      return false;
    }
    cur.skip_ws();
    if (!cur.at_end()) {
      error(cur.span_here(), "unexpected trailing input after '.'");
      return false;
    }
    return true;
  }

  std::optional<Lit> parse_lit(LineCursor& cur) {
    cur.skip_ws();
    bool positive = true;
    if (cur.peek() == '~' && cur.peek(1) != '>') {
      cur.eat('~');
      positive = false;
    }
    auto name = detail::lex_ident(cur);
    if (!name) {
      error(cur.span_here(), "expected a literal");
      return std::nullopt;
    }
    return Lit{theory_.symbols.intern(*name), positive};
  }

  std::optional<Item> parse_item(LineCursor& cur) {
    cur.skip_ws();
    bool negated = false;
    if (cur.peek() == '!') {
      cur.eat('!');
      negated = true;
    }
    cur.skip_ws();
    if ((cur.peek() == 'O' || cur.peek() == 'P') && cur.peek(1) == '(') {
      char mod = cur.peek();
      cur.pos += 2;
      auto lit = parse_lit(cur);
      if (!lit) return std::nullopt;
      cur.skip_ws();
      if (!cur.eat(')')) {
        error(cur.span_here(), "expected ')' after modal literal");
        return std::nullopt;
      }
      if (mod == 'O') return negated ? Item::not_obl(*lit) : Item::obl(*lit);
      return negated ? Item::not_perm(*lit) : Item::perm(*lit);
    }
    if (negated) {
      error(cur.span_here(), "'!' must be followed by O(...) or P(...)");
      return std::nullopt;
    }
    auto lit = parse_lit(cur);
    if (!lit) return std::nullopt;
    return Item::plain(*lit);
  }

  void parse_fact(LineCursor& cur) {
    auto it = parse_item(cur);
    if (!it) return;
    if (!expect_period(cur)) return;
    theory_.facts.push_back(*it);
  }

  // Returns 'x', 'o', or 0 (not a connective at the cursor).
  char peek_connective(LineCursor& cur) {
    cur.skip_ws();
    if (cur.peek() == '(' && (cur.peek(1) == 'x' || cur.peek(1) == 'o') && cur.peek(2) == ')')
      return cur.peek(1);
    if (cur.text.substr(cur.pos, 3) == "\xE2\x8A\x97") return 'x';  // ⊗
    if (cur.text.substr(cur.pos, 3) == "\xE2\x8A\x99") return 'o';  // ⊙
    return 0;
  }

  void eat_connective(LineCursor& cur) {
    if (cur.peek() == '(') cur.pos += 3;
    else cur.pos += 3;  // UTF-8 sequence is also 3 bytes
  }

  void parse_rule(LineCursor& cur) {
    auto label = detail::lex_ident(cur);
    if (!label) {
      error(cur.span_here(), "expected a rule label");
      return;
    }
    SourceSpan label_span{cur.line, cur.col() - static_cast<int>(label->size()),
                          static_cast<int>(label->size())};
    cur.skip_ws();
    if (!cur.eat(':')) {
      error(cur.span_here(), "expected ':' after rule label");
      return;
    }

    Rule rule;
    rule.label = *label;

    // antecedent items until an arrow
    auto at_arrow = [&]() {
      cur.skip_ws();
      return (cur.peek() == '=' && cur.peek(1) == '>') ||
             (cur.peek() == '~' && cur.peek(1) == '>');
    };
    if (!at_arrow()) {
      while (true) {
        auto it = parse_item(cur);
        if (!it) return;
        rule.antecedent.push_back(*it);
        cur.skip_ws();
        if (cur.eat(',')) continue;
        break;
      }
    }

    // arrow
    cur.skip_ws();
    if (cur.eat_str("~>")) {
      rule.kind = RuleKind::Defeater;
    } else if (cur.eat_str("=>")) {
      cur.skip_ws();
      char mod = cur.peek();
      if ((mod != 'O' && mod != 'P') || detail::ident_char(cur.peek(1))) {
        error(cur.span_here(), "expected '=>O' or '=>P'");
        return;
      }
      ++cur.pos;
      rule.kind = mod == 'O' ? RuleKind::ObligationRule : RuleKind::PermissionRule;
    } else {
      error(cur.span_here(), "expected '=>O', '=>P' or '~>'");
      return;
    }

    // chain
    bool seen_odot = false;
    int otimes_connectives = 0;
    while (true) {
      cur.skip_ws();
      if (cur.peek() == '!' ||
          ((cur.peek() == 'O' || cur.peek() == 'P') && cur.peek(1) == '(')) {
        error(cur.span_here(), "modal literals may not occur in a rule head",
              ParseError::Kind::NestedModality);
        return;
      }
      auto lit = parse_lit(cur);
      if (!lit) return;
      rule.head.elements.push_back(*lit);
      char conn = peek_connective(cur);
      if (!conn) break;
      SourceSpan conn_span = cur.span_here(3);
      eat_connective(cur);
      if (conn == 'x') {
        if (seen_odot) {
          error(conn_span, "'(x)' may not follow '(o)' in a chain",
                ParseError::Kind::MalformedChain);
          return;
        }
        if (rule.kind == RuleKind::PermissionRule) {
          error(conn_span, "a '=>P' head must be a pure '(o)' chain",
                ParseError::Kind::MalformedChain);
          return;
        }
        ++otimes_connectives;
      } else {
        seen_odot = true;
      }
    }
    if (!expect_period(cur)) return;

    if (rule.kind == RuleKind::Defeater && rule.head.elements.size() > 1) {
      error(label_span, "a defeater head must be a single literal",
            ParseError::Kind::MalformedChain);
      return;
    }
    rule.head.otimes_len = rule.kind == RuleKind::PermissionRule ? 0 : otimes_connectives + 1;
    rule.head = chain_normalize(rule.head);
    normalize_antecedent(rule.antecedent);

    if (!seen_labels_.insert(rule.label).second) {
      error(label_span, "duplicate rule label '" + rule.label + "'",
            ParseError::Kind::DuplicateLabel);
      return;
    }
    theory_.rules.push_back(std::move(rule));
  }

  void parse_sup(LineCursor& cur) {
    auto a = detail::lex_ident(cur);
    if (!a) { error(cur.span_here(), "expected a rule label"); return; }
    SourceSpan span{cur.line, cur.col() - static_cast<int>(a->size()),
                    static_cast<int>(a->size())};
    cur.skip_ws();
    if (!cur.eat('>')) { error(cur.span_here(), "expected '>' in sup statement"); return; }
    auto b = detail::lex_ident(cur);
    if (!b) { error(cur.span_here(), "expected a rule label"); return; }
    if (!expect_period(cur)) return;
    pending_sup_.emplace_back(*a, *b, span);
  }
};

inline ParseResult parse_theory(std::string_view text) {
  return TheoryParser{}.parse(text);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string serialize_theory(const Theory& t) {
  // emission order is name-based, not intern-order-based, so a theory and
  // its reparse serialize to identical bytes
  std::string out;
  std::vector<std::string> fact_lines;
  for (const auto& f : t.facts) fact_lines.push_back("fact " + item_string(t.symbols, f) + ".\n");
  std::sort(fact_lines.begin(), fact_lines.end());
  for (const auto& l : fact_lines) out += l;
  for (const auto& r : t.rules) {
    out += "rule " + r.label + ":";
    std::vector<std::string> ants;
    for (const auto& a : r.antecedent) ants.push_back(item_string(t.symbols, a));
    std::sort(ants.begin(), ants.end());
    for (std::size_t i = 0; i < ants.size(); ++i)
      out += (i ? "," : "") + std::string(" ") + ants[i];
    switch (r.kind) {
      case RuleKind::ObligationRule: out += " =>O"; break;
      case RuleKind::PermissionRule: out += " =>P"; break;
      case RuleKind::Defeater: out += " ~>"; break;
    }
    for (int i = 0; i < r.head.length(); ++i) {
      if (i > 0) out += i < r.head.otimes_len ? " (x)" : " (o)";
      out += " " + lit_string(t.symbols, r.head.elements[static_cast<std::size_t>(i)]);
    }
    out += ".\n";
  }
  for (const auto& [w, l] : t.sup.pairs) out += "sup " + w + " > " + l + ".\n";
  return out;
}

enum class ExtensionFormat { Json, Text };

inline std::vector<std::string> sorted_lit_strings(const SymbolTable& syms,
                                                   const std::set<Lit>& lits) {
  std::vector<std::string> out;
  out.reserve(lits.size());
  for (const Lit& l : lits) out.push_back(lit_string(syms, l));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string serialize_extension(const Extension& e, const SymbolTable& syms,
                                       ExtensionFormat format = ExtensionFormat::Json) {
  const std::pair<const char*, const std::set<Lit>*> groups[] = {
      {"plus_dO", &e.plus_dO},       {"plus_dP", &e.plus_dP},
      {"minus_dO", &e.minus_dO},     {"minus_dP", &e.minus_dP},
      {"undetermined_O", &e.undetermined_O}, {"undetermined_P", &e.undetermined_P},
  };
  if (format == ExtensionFormat::Json) {
    nlohmann::ordered_json j;
    for (const auto& [key, set] : groups) j[key] = sorted_lit_strings(syms, *set);
    return j.dump(2) + "\n";
  }
  std::string out;
  for (const auto& [key, set] : groups)
    for (const auto& s : sorted_lit_strings(syms, *set)) out += std::string(key) + " " + s + "\n";
  return out;
}

}  // namespace ddl

#endif  // DDL_PARSER_HPP
