#pragma once

// Learning-rule expressions.
//
// Grammar (whitespace is insignificant):
//
//   rule    ::= [ "+" | "-" ] term { ( "+" | "-" ) term }
//   term    ::= factor { "*" factor }
//   factor  ::= variable | scale
//   scale   ::= "2" "^" [ "+" | "-" ] digits | digits      (a power of two)
//   variable::= "x0" | "y0" | "x1" | "x2" | "y1" | "y2" | "y3" | "w" | "u0" .. "u9"
//
// Each term is normalised to sign * 2^k * (product of variables). Literal
// integers must be powers of two; every other number is rejected.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "loihi/errors.hpp"

namespace loihi {

enum class RuleVariable : std::uint8_t {
    x0, y0, x1, x2, y1, y2, y3, w,
    u0, u1, u2, u3, u4, u5, u6, u7, u8, u9,
};

std::string_view to_string(RuleVariable variable) noexcept;

struct RuleTerm {
    bool negative = false;
    int scale_exponent = 0;
    std::vector<RuleVariable> factors;

    friend bool operator==(const RuleTerm&, const RuleTerm&) = default;
};

struct LearningRule {
    std::vector<RuleTerm> terms;

    /// Canonical text; parse_rule(to_string()) reproduces this rule.
    std::string to_string() const;

    /// Indented one-term-per-line dump used by the CLI.
    std::string describe() const;

    friend bool operator==(const LearningRule&, const LearningRule&) = default;
};

/// Malformed rule text. position() is a zero-based character offset.
class RuleSyntaxError : public Error {
public:
    RuleSyntaxError(const std::string& message, std::size_t position);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A variable or operator that the hardware rule engine does not provide.
class UnsupportedSymbolError : public Error {
public:
    UnsupportedSymbolError(std::string symbol, std::size_t position);
    const std::string& symbol() const noexcept { return symbol_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string symbol_;
    std::size_t position_;
};

/// A numeric literal that is not a power of two.
class RuleScaleError : public Error {
public:
    RuleScaleError(const std::string& literal, std::size_t position);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

LearningRule parse_rule(std::string_view text);

/// Values visible to a rule at one timestep.
struct RuleEnv {
    bool x0 = false;  // presynaptic spike reached the synapse this step
    bool y0 = false;  // postsynaptic spike reached the synapse this step
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    std::int64_t y1 = 0;
    std::int64_t y2 = 0;
    std::int64_t y3 = 0;
    std::int64_t w = 0;  // weight mantissa
    std::int64_t t = 0;  // timestep
};

/// u0 = 1; u_k = 1 iff t mod 2^k == 0.
bool epoch_gate(int k, std::int64_t t) noexcept;

double eval_rule(const LearningRule& rule, const RuleEnv& env) noexcept;

}  // namespace loihi
