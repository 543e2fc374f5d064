#include "crlab/polyparse.hpp"

#include <cctype>

namespace crlab {

namespace {

struct Parser {
    const std::string& text;
    std::span<const std::string> vars;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw DomainError("polynomial parse error at position " + std::to_string(pos) + ": " +
                          what + " in '" + text + "'");
    }

    HoloPolynomial parse_expr() {
        HoloPolynomial acc = eat('-') ? parse_term() * Complex(-1.0) : parse_term();
        for (;;) {
            if (eat('+')) {
                acc += parse_term();
            } else if (eat('-')) {
                acc -= parse_term();
            } else {
                return acc;
            }
        }
    }

    HoloPolynomial parse_term() {
        HoloPolynomial acc = parse_power();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                acc = acc * parse_power();
                continue;
            }
            // implicit product: "3z", "z w", "2(z+w)"
            if (pos < text.size() &&
                (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '(')) {
                acc = acc * parse_power();
                continue;
            }
            return acc;
        }
    }

    HoloPolynomial parse_power() {
        HoloPolynomial base = parse_atom();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) fail("exponent expected");
            const int e = std::stoi(text.substr(start, pos - start));
            HoloPolynomial acc = HoloPolynomial::constant(base.nvars(), 1.0);
            for (int k = 0; k < e; ++k) acc = acc * base;
            return acc;
        }
        return base;
    }

    HoloPolynomial parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        if (eat('(')) {
            HoloPolynomial inner = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return inner;
        }
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == 'i' && !is_var_start()) {
            ++pos;
            return HoloPolynomial::constant(static_cast<int>(vars.size()), kI);
        }
        // longest-match variable name
        size_t match = vars.size();
        size_t match_len = 0;
        for (size_t v = 0; v < vars.size(); ++v) {
            const std::string& name = vars[v];
            if (name.size() > match_len && text.compare(pos, name.size(), name) == 0) {
                match = v;
                match_len = name.size();
            }
        }
        if (match == vars.size()) fail("unknown symbol");
        pos += match_len;
        return HoloPolynomial::monomial(static_cast<int>(vars.size()), static_cast<int>(match), 1);
    }

    bool is_var_start() {
        for (size_t v = 0; v < vars.size(); ++v)
            if (text.compare(pos, vars[v].size(), vars[v]) == 0) return true;
        return false;
    }

    HoloPolynomial parse_number() {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            ++pos;
        const double value = std::stod(text.substr(start, pos - start));
        if (pos < text.size() && text[pos] == 'i' && !is_var_start()) {
            ++pos;
            return HoloPolynomial::constant(static_cast<int>(vars.size()), value * kI);
        }
        return HoloPolynomial::constant(static_cast<int>(vars.size()), Complex(value, 0.0));
    }
};

}  // namespace

HoloPolynomial parse_polynomial(const std::string& text, std::span<const std::string> var_names) {
    Parser parser{text, var_names};
    HoloPolynomial p = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != text.size()) parser.fail("trailing input");
    return p;
}

}  // namespace crlab
