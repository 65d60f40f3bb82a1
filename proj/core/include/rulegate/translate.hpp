#pragma once

#include <map>
#include <string>
#include <vector>

#include "rulegate/asp.hpp"
#include "rulegate/dataset.hpp"
#include "rulegate/induction.hpp"

namespace rulegate {

// A translated ruleset plus the side tables needed to ground instances and
// to render explanations (symbol -> original category string).
struct translation {
  asp_program program;
  std::string target_class;
  std::string negative_class;
  std::string target_symbol;           // lowercased class constant
  std::size_t class_rule_count = 0;    // program.rules[0..count) are class rules
  std::vector<attribute> attrs;
  std::map<std::string, std::string> symbol_to_original;
  int scale_exponent = 1;
};

// Class rules become `label(X, <class>) :- ..., not abK(X, true), ...`;
// numeric thresholds are emitted as *10^d fixed-point integers.
translation translate(const ruleset& rs, int d);

// One ground fact per attribute: numeric scaled to 10^d, categorical as a
// symbol (or plain integer when the category is a canonical integer).
fact_set instance_to_facts(const std::vector<attribute>& attrs,
                           const instance& x, const std::string& id, int d);
fact_set instance_to_facts(const translation& t, const instance& x,
                           const std::string& id);

atom label_atom(const translation& t, const std::string& id);

// Canonical integer strings ("4", "-1", "0") become ASP integers; anything
// else is lowercased into a symbol.
term categorical_term(const std::string& v);

}  // namespace rulegate
