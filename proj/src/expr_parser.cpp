// Recursive-descent parser for the FunctionExpr notation.
//
//   expr   := [sign] term (sign term)*
//   term   := number ['*'] [factor] | factor
//   factor := number | tpow ['*' exp] | call
//   tpow   := 't' ['^' (integer | number | '(' number ')')]
//   call   := name '(' [sign] [number ['*']] 't' ')'

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "pqcalc/errors.hpp"
#include "pqcalc/function_expr.hpp"

namespace pqcalc {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    FunctionExpr parse() {
        std::vector<Item> items;
        skip_ws();
        if (at_end()) fail("empty expression");
        bool first = true;
        while (!at_end()) {
            double sign = 1.0;
            bool signed_term = false;
            if (peek() == '+' || peek() == '-') {
                sign = get() == '-' ? -1.0 : 1.0;
                signed_term = true;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            Item item = parse_term();
            item.coeff *= sign;
            item.plain = item.plain && !signed_term;
            items.push_back(std::move(item));
            first = false;
            skip_ws();
        }
        if (items.size() == 1) {
            const Item& only = items.front();
            if (only.bare_number) return FunctionExpr(fn::Const{only.coeff});
            if (only.plain) return FunctionExpr(only.atom);
        }
        std::vector<SumEntry> entries;
        for (auto& it : items) entries.push_back({it.coeff, it.atom});
        return FunctionExpr::sum(std::move(entries));
    }

private:
    struct Item {
        double coeff = 1.0;
        Atom atom;
        bool plain = false;        // no coefficient and no sign
        bool bare_number = false;  // a lone number
    };

    Item parse_term() {
        skip_ws();
        if (starts_number()) {
            const double c = parse_number();
            skip_ws();
            bool star = false;
            if (peek() == '*') {
                ++pos_;
                skip_ws();
                star = true;
            }
            if (!star && (at_end() || peek() == '+' || peek() == '-')) {
                return {c, fn::Const{1.0}, false, true};
            }
            return {c, parse_factor(), false, false};
        }
        return {1.0, parse_factor(), true, false};
    }

    Atom parse_factor() {
        skip_ws();
        if (starts_number() || peek() == '-' || peek() == '+') {
            const double sign = (peek() == '-') ? -1.0 : 1.0;
            if (peek() == '-' || peek() == '+') ++pos_;
            return fn::Const{sign * parse_number()};
        }
        if (peek() == 't' && !is_ident(peek(1))) return parse_tpow();
        return parse_call();
    }

    Atom parse_tpow() {
        expect('t');
        skip_ws();
        int n = 1;
        std::optional<double> power;
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            if (peek() == '(') {
                ++pos_;
                skip_ws();
                double sign = 1.0;
                if (peek() == '-') {
                    ++pos_;
                    sign = -1.0;
                }
                power = sign * parse_number();
                skip_ws();
                expect(')');
            } else {
                const std::size_t start = pos_;
                const double v = parse_number();
                const std::string_view tok(s_.data() + start, pos_ - start);
                if (tok.find_first_of(".eE") == std::string_view::npos) {
                    if (v > 10000) fail("monomial exponent too large");
                    n = static_cast<int>(v);
                } else {
                    power = v;
                }
            }
        }
        skip_ws();
        if (peek() == '*') {
            const std::size_t save = pos_;
            ++pos_;
            skip_ws();
            if (peek() == 'e' || peek() == 'E') {
                if (power) fail("t^alpha * exponential is not a supported family");
                const bool small = peek() == 'e';
                const std::string name = parse_ident();
                if (name != "e" && name != "E") fail(fmt::format("unknown function '{}'", name));
                const double a = parse_argument();
                if (small) return fn::MonomialTimesExpSmall{n, a};
                return fn::MonomialTimesExpBig{n, a};
            }
            pos_ = save;
            fail("only an exponential may multiply a power of t");
        }
        if (power) return fn::Power{*power};
        return fn::Monomial{n};
    }

    Atom parse_call() {
        const std::string name = parse_ident();
        if (name.empty()) fail("expected a function");
        const double a = parse_argument();
        if (name == "e") return fn::ExpSmall{a};
        if (name == "E") return fn::ExpBig{a};
        if (name == "cos") return fn::Cos{a};
        if (name == "sin") return fn::Sin{a};
        if (name == "Cos") return fn::BigCos{a};
        if (name == "Sin") return fn::BigSin{a};
        if (name == "cosh") return fn::Cosh{a};
        if (name == "sinh") return fn::Sinh{a};
        if (name == "Cosh") return fn::BigCosh{a};
        if (name == "Sinh") return fn::BigSinh{a};
        fail(fmt::format("unknown function '{}'", name));
    }

    // "(at)", "(t)", "(-t)", "(0.5*t)".
    double parse_argument() {
        skip_ws();
        expect('(');
        skip_ws();
        double sign = 1.0;
        if (peek() == '-' || peek() == '+') {
            if (get() == '-') sign = -1.0;
            skip_ws();
        }
        double a = 1.0;
        if (starts_number()) {
            a = parse_number();
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            }
        }
        expect('t');
        skip_ws();
        expect(')');
        return sign * a;
    }

    std::string parse_ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (!at_end() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    bool starts_number() const {
        return !at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.');
    }

    double parse_number() {
        double v = 0.0;
        const char* begin = s_.data() + pos_;
        const char* end = s_.data() + s_.size();
        // from_chars only consumes a complete exponent, so "2e(t)" stops after "2".
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        if (!std::isfinite(v)) fail("number out of range");
        return v;
    }

    static bool is_ident(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
    }
    char get() { return s_[pos_++]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        if (peek() != c) fail(fmt::format("expected '{}'", c));
        ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(fmt::format("cannot parse function \"{}\" at offset {}: {}", s_, pos_, why));
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

FunctionExpr parse_function(const std::string& text) {
    try {
        return Parser(text).parse();
    } catch (const ParseError&) {
        throw;
    } catch (const DomainError& e) {
        throw ParseError(fmt::format("invalid function \"{}\": {}", text, e.what()));
    }
}

}  // namespace pqcalc
