#include <cctype>

#include "rulegate/asp.hpp"
#include "rulegate/errors.hpp"

namespace rulegate {

const char* cmp_op_token(cmp_op op) {
  switch (op) {
    case cmp_op::eq: return "=";
    case cmp_op::neq: return "!=";
    case cmp_op::le: return "<=";
    case cmp_op::gt: return ">";
    case cmp_op::lt: return "<";
    case cmp_op::ge: return ">=";
  }
  return "=";
}

std::string print_term(const term& t) {
  switch (t.kind) {
    case term_kind::variable:
    case term_kind::symbol: return t.name;
    case term_kind::number: return std::to_string(t.num);
  }
  return "";
}

std::string print_atom(const atom& a) {
  std::string out = a.pred;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += print_term(a.args[i]);
  }
  out += ')';
  return out;
}

std::string print_comparison(const comparison& c) {
  return print_term(c.lhs) + ' ' + cmp_op_token(c.op) + ' ' +
         print_term(c.rhs);
}

std::string print_rule(const asp_rule& r) {
  std::string out = print_atom(r.head);
  if (!r.body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      const body_elem& e = r.body[i];
      switch (e.kind) {
        case elem_kind::positive: out += print_atom(e.a); break;
        case elem_kind::negative: out += "not " + print_atom(e.a); break;
        case elem_kind::compare: out += print_comparison(e.cmp); break;
      }
    }
  }
  out += '.';
  return out;
}

std::string print_program(const asp_program& p) {
  std::string out = "% scale: " + std::to_string(p.scale_exponent) + "\n";
  for (const auto& r : p.rules) out += print_rule(r) + "\n";
  return out;
}

std::string print_facts(const fact_set& f) {
  std::string out;
  for (const auto& a : f.facts) out += print_atom(a) + ".\n";
  return out;
}

std::string symbolize(const std::string& s) {
  std::string out;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::islower(u) || std::isdigit(u) || c == '_')
      out += c;
    else if (std::isupper(u))
      out += static_cast<char>(std::tolower(u));
    else
      out += '_';
  }
  if (out.empty()) throw schema_error("cannot symbolize empty string");
  if (!std::islower(static_cast<unsigned char>(out[0]))) out = "c" + out;
  return out;
}

}  // namespace rulegate
