#include "loihi/learning_rule.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

namespace loihi {

namespace {

constexpr std::array<std::string_view, 18> kVariableNames = {
    "x0", "y0", "x1", "x2", "y1", "y2", "y3", "w",
    "u0", "u1", "u2", "u3", "u4", "u5", "u6", "u7", "u8", "u9",
};

// Keeps scale exponents far away from double under/overflow.
constexpr int kMaxScaleExponent = 64;

bool lookup_variable(std::string_view name, RuleVariable& out) {
    for (std::size_t i = 0; i < kVariableNames.size(); ++i) {
        if (kVariableNames[i] == name) {
            out = static_cast<RuleVariable>(i);
            return true;
        }
    }
    return false;
}

bool is_identifier_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_identifier_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class RuleParser {
public:
    explicit RuleParser(std::string_view text) : text_(text) {}

    LearningRule parse() {
        LearningRule rule;
        skip_space();
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos_;
        }
        rule.terms.push_back(parse_term(negative));
        while (true) {
            skip_space();
            if (at_end()) {
                break;
            }
            const char c = peek();
            if (c != '+' && c != '-') {
                unexpected("'+', '-' or '*'");
            }
            ++pos_;
            rule.terms.push_back(parse_term(c == '-'));
        }
        return rule;
    }

private:
    RuleTerm parse_term(bool negative) {
        RuleTerm term;
        term.negative = negative;
        parse_factor(term);
        while (true) {
            skip_space();
            if (peek() != '*') {
                break;
            }
            ++pos_;
            parse_factor(term);
        }
        return term;
    }

    void parse_factor(RuleTerm& term) {
        skip_space();
        if (at_end()) {
            throw RuleSyntaxError("expected a variable or scale but reached end of rule", pos_);
        }
        const char c = peek();
        if (is_identifier_start(c)) {
            const std::size_t start = pos_;
            while (!at_end() && is_identifier_char(peek())) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            RuleVariable variable;
            if (!lookup_variable(name, variable)) {
                throw UnsupportedSymbolError(std::string(name), start);
            }
            term.factors.push_back(variable);
            return;
        }
        if (is_digit(c)) {
            add_scale(term, parse_scale());
            return;
        }
        unexpected("a variable or scale");
    }

    int parse_scale() {
        const std::size_t start = pos_;
        const std::string digits = read_digits();
        skip_space();
        if (peek() == '^') {
            if (digits != "2") {
                throw RuleScaleError(digits + "^...", start);
            }
            ++pos_;
            skip_space();
            bool negative = false;
            if (peek() == '+' || peek() == '-') {
                negative = peek() == '-';
                ++pos_;
                skip_space();
            }
            if (!is_digit(peek())) {
                unexpected("an integer exponent after '^'");
            }
            const std::size_t exp_start = pos_;
            const std::string exponent_digits = read_digits();
            if (exponent_digits.size() > 3) {
                throw RuleSyntaxError("scale exponent too large", exp_start);
            }
            const int exponent = std::stoi(exponent_digits);
            return negative ? -exponent : exponent;
        }
        // Plain literal: must be 2^k, k >= 0.
        if (digits.size() > 19) {
            throw RuleScaleError(digits, start);
        }
        const unsigned long long value = std::stoull(digits);
        if (value == 0 || (value & (value - 1)) != 0) {
            throw RuleScaleError(digits, start);
        }
        int exponent = 0;
        for (unsigned long long v = value; v > 1; v >>= 1) {
            ++exponent;
        }
        return exponent;
    }

    void add_scale(RuleTerm& term, int exponent) {
        term.scale_exponent += exponent;
        if (term.scale_exponent > kMaxScaleExponent || term.scale_exponent < -kMaxScaleExponent) {
            throw RuleSyntaxError("combined scale exponent outside [-64, 64]", pos_);
        }
    }

    std::string read_digits() {
        const std::size_t start = pos_;
        while (!at_end() && is_digit(peek())) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    [[noreturn]] void unexpected(const char* expected) {
        if (at_end()) {
            throw RuleSyntaxError(std::string("expected ") + expected + " but reached end of rule", pos_);
        }
        const char c = peek();
        if (c == '/' || c == '(' || c == ')' || c == '%' || c == '^' || c == '.' || c == '<' ||
            c == '>' || c == '=' || c == '!' || c == '&' || c == '|') {
            throw UnsupportedSymbolError(std::string(1, c), pos_);
        }
        throw RuleSyntaxError(std::string("expected ") + expected + " but found '" + c + "'", pos_);
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(RuleVariable variable) noexcept {
    return kVariableNames[static_cast<std::size_t>(variable)];
}

RuleSyntaxError::RuleSyntaxError(const std::string& message, std::size_t position)
    : Error("rule syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

UnsupportedSymbolError::UnsupportedSymbolError(std::string symbol, std::size_t position)
    : Error("unsupported symbol '" + symbol + "' at position " + std::to_string(position)),
      symbol_(std::move(symbol)),
      position_(position) {}

RuleScaleError::RuleScaleError(const std::string& literal, std::size_t position)
    : Error("scale '" + literal + "' at position " + std::to_string(position) +
            " is not a power of two (write 2^k)"),
      position_(position) {}

LearningRule parse_rule(std::string_view text) { return RuleParser(text).parse(); }

std::string LearningRule::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const RuleTerm& term = terms[i];
        if (i == 0) {
            if (term.negative) out << '-';
        } else {
            out << (term.negative ? " - " : " + ");
        }
        bool first = true;
        if (term.scale_exponent != 0 || term.factors.empty()) {
            if (term.scale_exponent == 0) {
                out << '1';
            } else {
                out << "2^" << term.scale_exponent;
            }
            first = false;
        }
        for (const RuleVariable factor : term.factors) {
            if (!first) out << '*';
            out << loihi::to_string(factor);
            first = false;
        }
    }
    return out.str();
}

std::string LearningRule::describe() const {
    std::ostringstream out;
    out << "rule: " << to_string() << '\n';
    out << "terms: " << terms.size() << '\n';
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const RuleTerm& term = terms[i];
        out << "  [" << i << "] sign=" << (term.negative ? '-' : '+')
            << " scale=2^" << term.scale_exponent << " factors=";
        if (term.factors.empty()) {
            out << "(none)";
        }
        for (std::size_t f = 0; f < term.factors.size(); ++f) {
            out << (f == 0 ? "" : ",") << loihi::to_string(term.factors[f]);
        }
        out << '\n';
    }
    return out.str();
}

bool epoch_gate(int k, std::int64_t t) noexcept {
    if (k == 0) {
        return true;
    }
    const std::int64_t period = std::int64_t{1} << k;
    return t % period == 0;
}

double eval_rule(const LearningRule& rule, const RuleEnv& env) noexcept {
    double total = 0.0;
    for (const RuleTerm& term : rule.terms) {
        double product = std::ldexp(1.0, term.scale_exponent);
        for (const RuleVariable factor : term.factors) {
            double value = 0.0;
            switch (factor) {
                case RuleVariable::x0: value = env.x0 ? 1.0 : 0.0; break;
                case RuleVariable::y0: value = env.y0 ? 1.0 : 0.0; break;
                case RuleVariable::x1: value = static_cast<double>(env.x1); break;
                case RuleVariable::x2: value = static_cast<double>(env.x2); break;
                case RuleVariable::y1: value = static_cast<double>(env.y1); break;
                case RuleVariable::y2: value = static_cast<double>(env.y2); break;
                case RuleVariable::y3: value = static_cast<double>(env.y3); break;
                case RuleVariable::w: value = static_cast<double>(env.w); break;
                default: {
                    const int k = static_cast<int>(factor) - static_cast<int>(RuleVariable::u0);
                    value = epoch_gate(k, env.t) ? 1.0 : 0.0;
                    break;
                }
            }
            product *= value;
        }
        total += term.negative ? -product : product;
    }
    return total;
}

}  // namespace loihi
