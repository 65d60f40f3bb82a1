#include <cctype>
#include <set>

#include "rulegate/asp.hpp"
#include "rulegate/errors.hpp"

namespace rulegate {

namespace {

enum class tok_kind { ident, variable, number, punct, end };

struct token {
  tok_kind kind;
  std::string text;
  std::int64_t num = 0;
  int line = 1;
  int col = 1;
};

class lexer {
 public:
  explicit lexer(std::string_view text) : text_(text) { advance(); }

  const token& peek() const { return cur_; }
  token take() {
    token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws_and_comments();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= text_.size()) {
      cur_ = {tok_kind::end, "", 0, line_, col_};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        word += text_[bump()];
      bool is_var = std::isupper(static_cast<unsigned char>(word[0]));
      // The listings capitalize True; accept it as the constant.
      if (word == "True") {
        cur_ = {tok_kind::ident, "true", 0, cur_.line, cur_.col};
      } else {
        cur_ = {is_var ? tok_kind::variable : tok_kind::ident, word, 0,
                cur_.line, cur_.col};
      }
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::string digits;
      if (c == '-') digits += text_[bump()];
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits += text_[bump()];
      cur_ = {tok_kind::number, digits, std::stoll(digits), cur_.line,
              cur_.col};
      return;
    }
    // multi-char operators first
    for (const char* op : {":-", "!=", "<=", ">="}) {
      if (text_.substr(pos_, 2) == op) {
        bump();
        bump();
        cur_ = {tok_kind::punct, op, 0, cur_.line, cur_.col};
        return;
      }
    }
    if (std::string("().,=<>").find(c) != std::string::npos) {
      bump();
      cur_ = {tok_kind::punct, std::string(1, c), 0, cur_.line, cur_.col};
      return;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", line_,
                      col_);
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  std::size_t bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return pos_++;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  token cur_;
};

class parser {
 public:
  explicit parser(std::string_view text) : lex_(text) {}

  asp_program program() {
    asp_program p;
    p.scale_exponent = scale_exponent_;
    while (lex_.peek().kind != tok_kind::end) p.rules.push_back(rule());
    for (const auto& r : p.rules) check_safety(r);
    return p;
  }

  fact_set facts() {
    fact_set f;
    while (lex_.peek().kind != tok_kind::end) {
      token t = lex_.peek();
      atom a = parse_atom();
      expect_punct(".");
      if (!a.ground())
        throw parse_error("fact is not ground", t.line, t.col);
      f.facts.push_back(std::move(a));
    }
    return f;
  }

  // "% scale: d" comments are consumed by the lexer, so callers extract the
  // scale from the raw text and pass it in.
  void set_scale(int d) { scale_exponent_ = d; }

 private:
  int scale_exponent_ = 1;

  asp_rule rule() {
    asp_rule r;
    r.head = parse_atom();
    if (punct_is(".")) {
      lex_.take();
      return r;
    }
    expect_punct(":-");
    while (true) {
      r.body.push_back(body_item());
      if (punct_is(",")) {
        lex_.take();
        continue;
      }
      expect_punct(".");
      break;
    }
    return r;
  }

  body_elem body_item() {
    const token& t = lex_.peek();
    if (t.kind == tok_kind::ident && t.text == "not") {
      lex_.take();
      return body_elem::neg(parse_atom());
    }
    if (t.kind == tok_kind::ident) {
      // could be an atom or a symbol-valued comparison
      token name = lex_.take();
      if (punct_is("(")) {
        lex_.take();
        atom a;
        a.pred = name.text;
        a.args = parse_args();
        return body_elem::pos(std::move(a));
      }
      return body_elem::compare(finish_comparison(term::sym(name.text)));
    }
    if (t.kind == tok_kind::variable) {
      token name = lex_.take();
      return body_elem::compare(finish_comparison(term::var(name.text)));
    }
    if (t.kind == tok_kind::number) {
      token n = lex_.take();
      return body_elem::compare(finish_comparison(term::integer(n.num)));
    }
    throw parse_error("expected body item", t.line, t.col);
  }

  comparison finish_comparison(term lhs) {
    const token& t = lex_.peek();
    cmp_op op;
    if (punct_is("=")) op = cmp_op::eq;
    else if (punct_is("!=")) op = cmp_op::neq;
    else if (punct_is("<=")) op = cmp_op::le;
    else if (punct_is(">")) op = cmp_op::gt;
    else if (punct_is("<")) op = cmp_op::lt;
    else if (punct_is(">=")) op = cmp_op::ge;
    else
      throw parse_error("expected comparison operator", t.line, t.col);
    lex_.take();
    return {std::move(lhs), op, parse_term()};
  }

  atom parse_atom() {
    const token& t = lex_.peek();
    if (t.kind != tok_kind::ident)
      throw parse_error("expected predicate name", t.line, t.col);
    atom a;
    a.pred = lex_.take().text;
    expect_punct("(");
    a.args = parse_args();
    return a;
  }

  // caller has consumed the opening parenthesis
  std::vector<term> parse_args() {
    std::vector<term> args;
    while (true) {
      args.push_back(parse_term());
      if (punct_is(",")) {
        lex_.take();
        continue;
      }
      expect_punct(")");
      break;
    }
    return args;
  }

  term parse_term() {
    token t = lex_.take();
    switch (t.kind) {
      case tok_kind::ident: return term::sym(t.text);
      case tok_kind::variable: return term::var(t.text);
      case tok_kind::number: return term::integer(t.num);
      default:
        throw parse_error("expected term", t.line, t.col);
    }
  }

  bool punct_is(const char* p) const {
    return lex_.peek().kind == tok_kind::punct && lex_.peek().text == p;
  }

  void expect_punct(const char* p) {
    const token& t = lex_.peek();
    if (!punct_is(p))
      throw parse_error(std::string("expected '") + p + "'", t.line, t.col);
    lex_.take();
  }

  void check_safety(const asp_rule& r) {
    std::set<std::string> bound;
    for (const auto& e : r.body)
      if (e.kind == elem_kind::positive)
        for (const auto& a : e.a.args)
          if (a.is_var()) bound.insert(a.name);
    auto require = [&](const term& t, const char* where) {
      if (t.is_var() && !bound.count(t.name))
        throw safety_error("unsafe variable '" + t.name + "' in " + where +
                           " of rule: " + print_rule(r));
    };
    for (const auto& a : r.head.args) require(a, "head");
    for (const auto& e : r.body) {
      if (e.kind == elem_kind::negative)
        for (const auto& a : e.a.args) require(a, "negated atom");
      if (e.kind == elem_kind::compare) {
        require(e.cmp.lhs, "comparison");
        require(e.cmp.rhs, "comparison");
      }
    }
  }

  lexer lex_;
};

// First "% scale: d" comment line, if any.
int extract_scale(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i != std::string_view::npos) {
      if (line[i] != '%') return 1;
      std::size_t mark = line.find("scale:", i);
      if (mark != std::string_view::npos) {
        int d = 0;
        bool seen = false;
        for (std::size_t j = mark + 6; j < line.size(); ++j) {
          char c = line[j];
          if (std::isdigit(static_cast<unsigned char>(c))) {
            d = d * 10 + (c - '0');
            seen = true;
          } else if (seen || !std::isspace(static_cast<unsigned char>(c))) {
            break;
          }
        }
        if (seen) return d;
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return 1;
}

}  // namespace

asp_program parse_program(std::string_view text) {
  parser p(text);
  p.set_scale(extract_scale(text));
  asp_program prog = p.program();
  stratify(prog);  // throws on a cycle through negation
  return prog;
}

fact_set parse_facts(std::string_view text) {
  parser p(text);
  return p.facts();
}

}  // namespace rulegate
