#pragma once

// Arithmetic for phase entries in config files:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := number | 'pi' | '(' expr ')' | '-' factor
//   number := digit+ ('.' digit*)?
//
// Whitespace is ignored; U+2212 (minus sign) is accepted wherever '-' is.

#include <cctype>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>

#include "lhv/errors.hpp"

namespace lhv {

namespace detail {

class PhaseExprParser {
public:
    explicit PhaseExprParser(std::string_view src) : src_(src) {}

    double parse() {
        skip_ws();
        if (pos_ == src_.size()) fail("empty expression");
        const double v = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
        return v;
    }

private:
    double expr() {
        double v = term();
        while (true) {
            skip_ws();
            if (accept('+')) {
                v += term();
            } else if (accept_minus()) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        while (true) {
            skip_ws();
            if (accept('*')) {
                v *= factor();
            } else if (peek() == '/') {
                const std::size_t at = pos_++;
                const double d = factor();
                if (d == 0.0) throw ParseError("division by zero at offset " + std::to_string(at), at);
                v /= d;
            } else {
                return v;
            }
        }
    }

    double factor() {
        skip_ws();
        if (pos_ == src_.size()) fail("unexpected end of expression, expected a number, 'pi' or '('");
        if (accept_minus()) return -factor();
        if (accept('(')) {
            const double v = expr();
            skip_ws();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (src_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return std::numbers::pi;
        }
        if (std::isdigit(static_cast<unsigned char>(peek()))) return number();
        fail("expected a number, 'pi' or '('");
    }

    double number() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        return std::stod(std::string(src_.substr(start, pos_ - start)));
    }

    [[nodiscard]] char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    bool accept_minus() {
        if (accept('-')) return true;
        if (src_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at offset " + std::to_string(pos_), pos_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Evaluates a phase expression in radians. Throws ParseError carrying the
/// zero-based offset of the first fault.
inline double parse_phase_expr(std::string_view source) { return detail::PhaseExprParser(source).parse(); }

}  // namespace lhv
