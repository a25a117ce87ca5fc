#pragma once

// Generator expressions: complex literals (2, 3i, 1+2i), the variable z,
// + - * /, integer powers ^, sqrt/exp/log (principal branches) and
// parentheses. Evaluation runs a compiled stack program; `eval_recursive`
// walks the tree directly and serves as the reference.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "holo_core.hpp"

namespace reslab {

class parse_error : public error {
public:
    parse_error(std::size_t at, std::vector<std::string> expected_tokens, const std::string& found)
        : error(message(at, expected_tokens, found)), offset(at), expected(std::move(expected_tokens)) {}

    std::size_t offset;
    std::vector<std::string> expected;

private:
    static std::string message(std::size_t at, const std::vector<std::string>& exp, const std::string& found) {
        std::ostringstream os;
        os << "syntax error at offset " << at << ": found " << found << ", expected one of {";
        for (std::size_t i = 0; i < exp.size(); ++i) os << (i ? ", " : "") << exp[i];
        os << "}";
        return os.str();
    }
};

enum class ExprKind { number, variable, negate, add, subtract, multiply, divide, power, sqrt, exp, log };

struct Expr {
    ExprKind kind;
    cplx value{};       // number
    int exponent = 0;   // power
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

namespace detail {

inline ExprPtr make_node(ExprKind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    return std::make_shared<const Expr>(Expr{k, {}, 0, std::move(a), std::move(b)});
}

inline cplx int_power(cplx base, int n) {
    const bool invert = n < 0;
    unsigned m = invert ? static_cast<unsigned>(-(long long)n) : static_cast<unsigned>(n);
    cplx acc{1.0, 0.0};
    while (m) {
        if (m & 1u) acc *= base;
        base *= base;
        m >>= 1u;
    }
    return invert ? 1.0 / acc : acc;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    ExprPtr parse() {
        if (s_.find_first_not_of(" \t") == std::string_view::npos)
            fail({"expression"});
        ExprPtr e = expression();
        skip();
        if (pos_ != s_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip();
        std::string found = pos_ < s_.size() ? "'" + std::string(1, s_[pos_]) + "'" : "end of input";
        throw parse_error(pos_, std::move(expected), found);
    }

    static const std::vector<std::string>& operand_tokens() {
        static const std::vector<std::string> t{"number", "'i'", "'z'", "'('", "'-'", "sqrt", "exp", "log"};
        return t;
    }

    ExprPtr expression() {
        ExprPtr lhs = term();
        while (peek('+') || peek('-')) {
            const ExprKind k = s_[pos_] == '+' ? ExprKind::add : ExprKind::subtract;
            ++pos_;
            lhs = make_node(k, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (peek('*') || peek('/')) {
            const ExprKind k = s_[pos_] == '*' ? ExprKind::multiply : ExprKind::divide;
            ++pos_;
            lhs = make_node(k, lhs, unary());
        }
        return lhs;
    }

    ExprPtr unary() {
        if (peek('-')) {
            ++pos_;
            return make_node(ExprKind::negate, unary());
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        while (peek('^')) {
            ++pos_;
            skip();
            bool negative = false;
            if (pos_ < s_.size() && s_[pos_] == '-') {
                negative = true;
                ++pos_;
            }
            skip();
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == start) fail({"integer exponent"});
            const int n = std::stoi(std::string(s_.substr(start, pos_ - start)));
            auto node = std::make_shared<Expr>(Expr{ExprKind::power, {}, negative ? -n : n, base, nullptr});
            base = node;
        }
        return base;
    }

    ExprPtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        const std::string lit(s_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(lit.c_str(), &end);
        if (lit.empty() || end != lit.c_str() + lit.size()) {
            pos_ = start;
            fail({"number"});
        }
        auto node = std::make_shared<Expr>(Expr{ExprKind::number, {v, 0.0}, 0, nullptr, nullptr});
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            node->value = {0.0, v};
        }
        return node;
    }

    ExprPtr primary() {
        skip();
        if (pos_ >= s_.size()) fail(operand_tokens());
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            ExprPtr e = expression();
            if (!peek(')')) fail({"')'", "'+'", "'-'", "'*'", "'/'", "'^'"});
            ++pos_;
            return e;
        }
        for (auto [name, kind] : {std::pair{"sqrt", ExprKind::sqrt}, std::pair{"exp", ExprKind::exp},
                                  std::pair{"log", ExprKind::log}}) {
            const std::string_view n(name);
            if (s_.substr(pos_, n.size()) == n) {
                pos_ += n.size();
                if (!peek('(')) fail({"'('"});
                ++pos_;
                ExprPtr arg = expression();
                if (!peek(')')) fail({"')'"});
                ++pos_;
                return make_node(kind, arg);
            }
        }
        if (c == 'z') {
            ++pos_;
            return make_node(ExprKind::variable);
        }
        if (c == 'i') {
            ++pos_;
            return std::make_shared<const Expr>(Expr{ExprKind::number, {0.0, 1.0}, 0, nullptr, nullptr});
        }
        fail(operand_tokens());
    }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Parses `text`; throws parse_error with the byte offset of the failure.
inline ExprPtr parse_expression(std::string_view text) { return detail::Parser(text).parse(); }

/// Canonical, fully parenthesized rendering. Parsing it reproduces the tree.
inline std::string print_expression(const Expr& e) {
    using detail::format_double;
    auto bin = [&](const char* op) { return "(" + print_expression(*e.lhs) + " " + op + " " + print_expression(*e.rhs) + ")"; };
    switch (e.kind) {
        case ExprKind::number:
            if (e.value.imag() == 0.0) return format_double(e.value.real());
            if (e.value.real() == 0.0) return format_double(e.value.imag()) + "i";
            return "(" + format_double(e.value.real()) + " + " + format_double(e.value.imag()) + "i)";
        case ExprKind::variable: return "z";
        case ExprKind::negate: return "(-" + print_expression(*e.lhs) + ")";
        case ExprKind::add: return bin("+");
        case ExprKind::subtract: return bin("-");
        case ExprKind::multiply: return bin("*");
        case ExprKind::divide: return bin("/");
        case ExprKind::power: return "(" + print_expression(*e.lhs) + "^" + std::to_string(e.exponent) + ")";
        case ExprKind::sqrt: return "sqrt(" + print_expression(*e.lhs) + ")";
        case ExprKind::exp: return "exp(" + print_expression(*e.lhs) + ")";
        case ExprKind::log: return "log(" + print_expression(*e.lhs) + ")";
    }
    return {};
}

inline bool contains_variable(const Expr& e) {
    if (e.kind == ExprKind::variable) return true;
    return (e.lhs && contains_variable(*e.lhs)) || (e.rhs && contains_variable(*e.rhs));
}

/// Tree-walking evaluator.
inline cplx eval_recursive(const Expr& e, cplx z) {
    switch (e.kind) {
        case ExprKind::number: return e.value;
        case ExprKind::variable: return z;
        case ExprKind::negate: return -eval_recursive(*e.lhs, z);
        case ExprKind::add: return eval_recursive(*e.lhs, z) + eval_recursive(*e.rhs, z);
        case ExprKind::subtract: return eval_recursive(*e.lhs, z) - eval_recursive(*e.rhs, z);
        case ExprKind::multiply: return eval_recursive(*e.lhs, z) * eval_recursive(*e.rhs, z);
        case ExprKind::divide: return eval_recursive(*e.lhs, z) / eval_recursive(*e.rhs, z);
        case ExprKind::power: return detail::int_power(eval_recursive(*e.lhs, z), e.exponent);
        case ExprKind::sqrt: return std::sqrt(eval_recursive(*e.lhs, z));
        case ExprKind::exp: return std::exp(eval_recursive(*e.lhs, z));
        case ExprKind::log: return std::log(eval_recursive(*e.lhs, z));
    }
    return {};
}

/// Postfix program for a stack machine.
class CompiledExpr {
public:
    explicit CompiledExpr(const Expr& root) { emit(root); }

    cplx operator()(cplx z) const {
        std::vector<cplx> stack;
        stack.reserve(depth_);
        for (const Op& op : ops_) {
            switch (op.kind) {
                case ExprKind::number: stack.push_back(op.value); break;
                case ExprKind::variable: stack.push_back(z); break;
                case ExprKind::negate: stack.back() = -stack.back(); break;
                case ExprKind::power: stack.back() = detail::int_power(stack.back(), op.exponent); break;
                case ExprKind::sqrt: stack.back() = std::sqrt(stack.back()); break;
                case ExprKind::exp: stack.back() = std::exp(stack.back()); break;
                case ExprKind::log: stack.back() = std::log(stack.back()); break;
                default: {
                    const cplx b = stack.back();
                    stack.pop_back();
                    cplx& a = stack.back();
                    if (op.kind == ExprKind::add) a += b;
                    else if (op.kind == ExprKind::subtract) a -= b;
                    else if (op.kind == ExprKind::multiply) a *= b;
                    else a /= b;
                }
            }
        }
        return stack.back();
    }

private:
    struct Op {
        ExprKind kind;
        cplx value;
        int exponent;
    };
    std::vector<Op> ops_;
    std::size_t depth_ = 0;
    std::size_t live_ = 0;

    void emit(const Expr& e) {
        if (e.lhs) emit(*e.lhs);
        if (e.rhs) emit(*e.rhs);
        ops_.push_back({e.kind, e.value, e.exponent});
        if (e.kind == ExprKind::number || e.kind == ExprKind::variable) ++live_;
        else if (e.rhs) --live_;
        depth_ = std::max(depth_, live_);
    }
};

/// A parsed generator expression.
struct GeneratorExpr {
    std::string source;
    ExprPtr ast;

    cplx eval(cplx z) const { return CompiledExpr(*ast)(z); }
    std::string print() const { return print_expression(*ast); }

    /// Evaluable map; its derivative goes through the Cauchy ring.
    HoloMap to_map() const {
        auto program = std::make_shared<const CompiledExpr>(*ast);
        return HoloMap([program](cplx z) { return (*program)(z); }, source);
    }
};

inline GeneratorExpr parse_generator(std::string_view text) {
    return GeneratorExpr{std::string(text), parse_expression(text)};
}

}  // namespace reslab
