#pragma once

#include "cdga/element.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace cdga {

// Recursive-descent parser for polynomial text:
//   expr    := ['-'|'+'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ['^' INT]
//   primary := RATIONAL | NAME | '(' expr ')'
//   RATIONAL:= INT ['/' INT]
// Whitespace is insignificant.  Names must be generators of the algebra.
class PolynomialParser {
public:
    PolynomialParser(const std::string& text, const Algebra& algebra)
        : text_(text), alg_(algebra) {}

    Element parse() {
        Element e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    Element expr() {
        skip_ws();
        int sign = 1;
        if (peek() == '-') {
            sign = -1;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        Element e = term();
        if (sign < 0) e = -e;
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c == '+') {
                ++pos_;
                e += term();
            } else if (c == '-') {
                ++pos_;
                e -= term();
            } else {
                return e;
            }
        }
    }

    Element term() {
        Element e = factor();
        for (;;) {
            skip_ws();
            if (peek() != '*') return e;
            ++pos_;
            e = e * factor();
        }
    }

    Element factor() {
        Element e = primary();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            const long k = integer();
            if (k < 1) fail("exponent must be positive");
            e = e.pow(static_cast<int>(k));
        }
        return e;
    }

    Element primary() {
        skip_ws();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Element e = expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const long num = integer();
            skip_ws();
            if (peek() == '/') {
                ++pos_;
                skip_ws();
                const long den = integer();
                if (den == 0) fail("zero denominator");
                return alg_.constant(Rational(num, den));
            }
            return alg_.constant(Rational(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                name += text_[pos_++];
            if (!alg_.signature().has(name)) fail("unknown generator '" + name + "'");
            return alg_.generator(name);
        }
        fail("expected a coefficient, generator, or '('");
        return alg_.zero();  // unreachable
    }

    long integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1000000000L) fail("integer literal too large");
            ++pos_;
        }
        return v;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    const std::string& text_;
    const Algebra& alg_;
    std::size_t pos_ = 0;
};

inline Element parse_element(const std::string& text, const Algebra& algebra) {
    return PolynomialParser(text, algebra).parse();
}

}  // namespace cdga
