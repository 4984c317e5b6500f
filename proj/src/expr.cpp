#include "sigms/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace sigms {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double x, double y) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Constant : Node {
    double v;
    explicit Constant(double v) : v(v) {}
    double eval(double, double) const override { return v; }
};
struct VarX : Node {
    double eval(double x, double) const override { return x; }
};
struct VarY : Node {
    double eval(double, double y) const override { return y; }
};
struct Binary : Node {
    char op;
    NodePtr a, b;
    Binary(char op, NodePtr a, NodePtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
    double eval(double x, double y) const override {
        const double u = a->eval(x, y), v = b->eval(x, y);
        switch (op) {
            case '+': return u + v;
            case '-': return u - v;
            case '*': return u * v;
            case '/': return u / v;
            case '^': return std::pow(u, v);
        }
        return 0.0;
    }
};
struct Negate : Node {
    NodePtr a;
    explicit Negate(NodePtr a) : a(std::move(a)) {}
    double eval(double x, double y) const override { return -a->eval(x, y); }
};
struct Unary : Node {
    double (*fn)(double);
    NodePtr a;
    Unary(double (*fn)(double), NodePtr a) : fn(fn), a(std::move(a)) {}
    double eval(double x, double y) const override { return fn(a->eval(x, y)); }
};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr n = sum();
        skip_ws();
        if (pos_ != s_.size())
            throw ConfigError("expression: unexpected trailing input at '" +
                              s_.substr(pos_) + "'");
        return n;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr sum() {
        NodePtr n = product();
        for (;;) {
            if (consume('+'))
                n = std::make_shared<Binary>('+', n, product());
            else if (consume('-'))
                n = std::make_shared<Binary>('-', n, product());
            else
                return n;
        }
    }
    NodePtr product() {
        NodePtr n = power();
        for (;;) {
            if (consume('*'))
                n = std::make_shared<Binary>('*', n, power());
            else if (consume('/'))
                n = std::make_shared<Binary>('/', n, power());
            else
                return n;
        }
    }
    NodePtr power() {
        NodePtr base = unary();
        if (consume('^')) return std::make_shared<Binary>('^', base, power());
        return base;
    }
    NodePtr unary() {
        if (consume('-')) return std::make_shared<Negate>(unary());
        consume('+');
        return atom();
    }
    NodePtr atom() {
        skip_ws();
        if (consume('(')) {
            NodePtr n = sum();
            if (!consume(')')) throw ConfigError("expression: missing ')'");
            return n;
        }
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ConfigError("expression: unexpected character '" + std::string(1, c) + "'");
    }
    NodePtr number() {
        std::size_t end = 0;
        const double v = std::stod(s_.substr(pos_), &end);
        pos_ += end;
        return std::make_shared<Constant>(v);
    }
    NodePtr identifier() {
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            name += s_[pos_++];
        if (name == "x") return std::make_shared<VarX>();
        if (name == "y") return std::make_shared<VarY>();
        if (name == "pi") return std::make_shared<Constant>(M_PI);
        if (!consume('('))
            throw ConfigError("expression: unknown symbol '" + name + "'");
        NodePtr arg = sum();
        if (!consume(')')) throw ConfigError("expression: missing ')' after " + name);
        auto mk = [&arg](double (*fn)(double)) { return std::make_shared<Unary>(fn, arg); };
        if (name == "sin") return mk([](double v) { return std::sin(v); });
        if (name == "cos") return mk([](double v) { return std::cos(v); });
        if (name == "tan") return mk([](double v) { return std::tan(v); });
        if (name == "exp") return mk([](double v) { return std::exp(v); });
        if (name == "log") return mk([](double v) { return std::log(v); });
        if (name == "sqrt") return mk([](double v) { return std::sqrt(v); });
        if (name == "abs") return mk([](double v) { return std::fabs(v); });
        throw ConfigError("expression: unknown function '" + name + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

bool is_blank_or_zero(const std::string& text) {
    bool any = false;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) {
            any = true;
            break;
        }
    if (!any) return true;
    try {
        std::size_t end = 0;
        const double v = std::stod(text, &end);
        while (end < text.size() && std::isspace(static_cast<unsigned char>(text[end]))) ++end;
        return end == text.size() && v == 0.0;
    } catch (...) {
        return false;
    }
}

} // namespace

ScalarField compile_expression(const std::string& text) {
    if (is_blank_or_zero(text)) return {};
    NodePtr root = Parser(text).parse();
    return [root](double x, double y) { return root->eval(x, y); };
}

ScalarField builtin_source_f1() {
    return [](double x, double y) {
        return -2.0 * x + 3.0 * y + std::sin(2.0 * M_PI * x) * std::sin(2.0 * M_PI * y);
    };
}

ScalarField builtin_source_f2() {
    return [](double x, double y) {
        return 0.5 - x * x + y * y + std::cos(1.5 * M_PI * x + M_PI * y);
    };
}

ScalarField resolve_source(const std::string& selector) {
    if (selector == "f1") return builtin_source_f1();
    if (selector == "f2") return builtin_source_f2();
    return compile_expression(selector);
}

} // namespace sigms
