#include "gibbstree/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

#include "gibbstree/errors.hpp"

namespace gibbstree {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double t, double u) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Num : Node {
    double v;
    explicit Num(double x) : v(x) {}
    double eval(double, double) const override { return v; }
};

struct Var : Node {
    bool is_t;
    explicit Var(bool t) : is_t(t) {}
    double eval(double t, double u) const override { return is_t ? t : u; }
};

struct Unary : Node {
    NodePtr a;
    double (*fn)(double);
    Unary(NodePtr x, double (*f)(double)) : a(std::move(x)), fn(f) {}
    double eval(double t, double u) const override { return fn(a->eval(t, u)); }
};

struct Binary : Node {
    NodePtr a, b;
    double (*fn)(double, double);
    Binary(NodePtr x, NodePtr y, double (*f)(double, double))
        : a(std::move(x)), b(std::move(y)), fn(f) {}
    double eval(double t, double u) const override { return fn(a->eval(t, u), b->eval(t, u)); }
};

double real_root(double n, double x) {
    const long long ni = static_cast<long long>(std::llround(n));
    if (ni < 1 || static_cast<double>(ni) != n) return std::nan("");
    if (ni % 2 == 1)  // real odd root, defined on all of R
        return (x < 0 ? -1.0 : 1.0) * std::pow(std::abs(x), 1.0 / static_cast<double>(ni));
    if (x < 0) return std::nan("");
    return std::pow(x, 1.0 / static_cast<double>(ni));
}

double sign_fn(double x) { return x > 0 ? 1.0 : x < 0 ? -1.0 : 0.0; }

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw config_error("expression error at position " + std::to_string(pos) + ": " + msg);
    }

    NodePtr parse() {
        auto e = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    NodePtr expr() {
        auto a = term();
        for (;;) {
            if (consume('+'))
                a = std::make_unique<Binary>(std::move(a), term(),
                                             +[](double x, double y) { return x + y; });
            else if (consume('-'))
                a = std::make_unique<Binary>(std::move(a), term(),
                                             +[](double x, double y) { return x - y; });
            else
                return a;
        }
    }

    NodePtr term() {
        auto a = factor();
        for (;;) {
            if (consume('*'))
                a = std::make_unique<Binary>(std::move(a), factor(),
                                             +[](double x, double y) { return x * y; });
            else if (consume('/'))
                a = std::make_unique<Binary>(std::move(a), factor(),
                                             +[](double x, double y) { return x / y; });
            else
                return a;
        }
    }

    NodePtr factor() {
        skip_ws();
        if (consume('-'))
            return std::make_unique<Unary>(factor(), +[](double x) { return -x; });
        if (consume('+')) return factor();
        auto base = primary();
        if (consume('^'))  // right-associative
            return std::make_unique<Binary>(std::move(base), factor(),
                                            +[](double x, double y) { return std::pow(x, y); });
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            double v = std::strtod(s.c_str() + pos, &end);
            if (end == s.c_str() + pos) fail("bad number");
            pos = end - s.c_str();
            return std::make_unique<Num>(v);
        }
        if (c == '(') {
            ++pos;
            auto e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            if (name == "t") return std::make_unique<Var>(true);
            if (name == "u") return std::make_unique<Var>(false);
            if (name == "pi") return std::make_unique<Num>(3.14159265358979323846);
            if (name == "e") return std::make_unique<Num>(2.71828182845904523536);
            if (!consume('(')) fail("unknown identifier '" + name + "'");
            std::vector<NodePtr> args;
            if (!consume(')')) {
                args.push_back(expr());
                while (consume(',')) args.push_back(expr());
                if (!consume(')')) fail("expected ')'");
            }
            auto need = [&](size_t n) {
                if (args.size() != n)
                    fail("function '" + name + "' expects " + std::to_string(n) + " argument(s)");
            };
            if (name == "exp") { need(1); return std::make_unique<Unary>(std::move(args[0]), +[](double x) { return std::exp(x); }); }
            if (name == "ln") { need(1); return std::make_unique<Unary>(std::move(args[0]), +[](double x) { return std::log(x); }); }
            if (name == "abs") { need(1); return std::make_unique<Unary>(std::move(args[0]), +[](double x) { return std::abs(x); }); }
            if (name == "sqrt") { need(1); return std::make_unique<Unary>(std::move(args[0]), +[](double x) { return std::sqrt(x); }); }
            if (name == "sign") { need(1); return std::make_unique<Unary>(std::move(args[0]), sign_fn); }
            if (name == "pow") { need(2); return std::make_unique<Binary>(std::move(args[0]), std::move(args[1]), +[](double x, double y) { return std::pow(x, y); }); }
            if (name == "root") { need(2); return std::make_unique<Binary>(std::move(args[0]), std::move(args[1]), real_root); }
            fail("unknown function '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
    Parser p(text);
    std::shared_ptr<Node> root{p.parse().release()};
    return [root](double t, double u) { return root->eval(t, u); };
}

}  // namespace gibbstree
