#pragma once

#include "capdesc/bigq.hpp"
#include "capdesc/errors.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace capdesc {

// Recursive-descent parser for the data-file expression grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := integer | identifier | '(' expr ')'
// The Builder maps constants, identifiers and integer powers into its Value
// type, which must provide + - * / and unary minus.
template <class Builder>
typename Builder::Value parse_expression(const std::string& text, const Builder& builder) {
    using Value = typename Builder::Value;

    struct Parser {
        const std::string& s;
        const Builder& b;
        std::size_t pos = 0;

        [[noreturn]] void fail(const std::string& msg) const {
            throw ParseError(msg + " at offset " + std::to_string(pos) + " in '" + s + "'");
        }
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }
        std::string digits() {
            skip();
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (start == pos) fail("expected integer");
            return s.substr(start, pos - start);
        }
        Value expr() {
            Value v = term();
            while (true) {
                if (eat('+')) v = v + term();
                else if (eat('-')) v = v - term();
                else return v;
            }
        }
        Value term() {
            Value v = unary();
            while (true) {
                if (eat('*')) v = v * unary();
                else if (eat('/')) v = v / unary();
                else return v;
            }
        }
        Value unary() {
            if (eat('-')) return -unary();
            if (eat('+')) return unary();
            return power();
        }
        Value power() {
            Value base = atom();
            if (!eat('^')) return base;
            const bool neg = eat('-');
            const std::string e = digits();
            if (e.size() > 6) fail("exponent too large");
            const long n = std::stol(e);
            return b.power(base, neg ? -n : n);
        }
        Value atom() {
            skip();
            if (pos >= s.size()) fail("unexpected end of expression");
            const char c = s[pos];
            if (c == '(') {
                ++pos;
                Value v = expr();
                if (!eat(')')) fail("expected ')'");
                return v;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) return b.constant(BigQ::parse(digits()));
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
                return b.variable(s.substr(start, pos - start));
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    Parser p{text, builder};
    Value v = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

}  // namespace capdesc
