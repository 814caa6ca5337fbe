#include "nep/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "nep/errors.hpp"

namespace nep {

struct Expression::Node {
    enum class Kind { number, variable, neg, add, sub, mul, div, pow, exp, ln, sqrt, piecewise };
    enum class Rel { lt, le, gt, ge };

    Kind kind = Kind::number;
    Rel rel = Rel::lt;
    double value = 0.0;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(double u) const
    {
        switch (kind) {
        case Kind::number: return value;
        case Kind::variable: return u;
        case Kind::neg: return -args[0]->eval(u);
        case Kind::add: return args[0]->eval(u) + args[1]->eval(u);
        case Kind::sub: return args[0]->eval(u) - args[1]->eval(u);
        case Kind::mul: return args[0]->eval(u) * args[1]->eval(u);
        case Kind::div: return args[0]->eval(u) / args[1]->eval(u);
        case Kind::pow: {
            double b = args[0]->eval(u);
            double e = args[1]->eval(u);
            double ie = std::round(e);
            if (ie == e && std::fabs(ie) <= 64) {
                // Integer powers by repeated multiplication keep negative bases valid.
                int n = static_cast<int>(std::fabs(ie));
                double r = 1.0;
                for (int i = 0; i < n; ++i) {
                    r *= b;
                }
                return ie < 0 ? 1.0 / r : r;
            }
            return std::pow(b, e);
        }
        case Kind::exp: return std::exp(args[0]->eval(u));
        case Kind::ln: return std::log(args[0]->eval(u));
        case Kind::sqrt: return std::sqrt(args[0]->eval(u));
        case Kind::piecewise: {
            double a = args[0]->eval(u);
            double b = args[1]->eval(u);
            bool holds = false;
            switch (rel) {
            case Rel::lt: holds = a < b; break;
            case Rel::le: holds = a <= b; break;
            case Rel::gt: holds = a > b; break;
            case Rel::ge: holds = a >= b; break;
            }
            return holds ? args[2]->eval(u) : args[3]->eval(u);
        }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse()
    {
        NodePtr n = sum();
        skip();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return n;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorCode::parse, msg + " at offset " + std::to_string(pos_) + " in '" +
                                          std::string(text_) + "'");
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    static NodePtr make(Node::Kind k, std::vector<NodePtr> args = {}, double value = 0.0)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->args = std::move(args);
        n->value = value;
        return n;
    }

    NodePtr sum()
    {
        NodePtr lhs = product();
        for (;;) {
            if (accept('+')) {
                lhs = make(Node::Kind::add, {lhs, product()});
            } else if (accept('-')) {
                lhs = make(Node::Kind::sub, {lhs, product()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr product()
    {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Node::Kind::mul, {lhs, unary()});
            } else if (accept('/')) {
                lhs = make(Node::Kind::div, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            return make(Node::Kind::neg, {unary()});
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) {
            return make(Node::Kind::pow, {base, unary()});
        }
        return base;
    }

    std::string identifier()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string rest(text_.substr(pos_));
            char* end = nullptr;
            double value = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) {
                fail("malformed number");
            }
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return make(Node::Kind::number, {}, value);
        }
        if (accept('(')) {
            NodePtr inner = sum();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name = identifier();
            if (name == "u") {
                return make(Node::Kind::variable);
            }
            if (name == "e") {
                return make(Node::Kind::number, {}, std::exp(1.0));
            }
            if (name == "exp" || name == "ln" || name == "log" || name == "sqrt") {
                expect('(');
                NodePtr arg = sum();
                expect(')');
                Node::Kind k = name == "exp"    ? Node::Kind::exp
                               : name == "sqrt" ? Node::Kind::sqrt
                                                : Node::Kind::ln;
                return make(k, {arg});
            }
            if (name == "piecewise") {
                return piecewise();
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr piecewise()
    {
        expect('(');
        NodePtr lhs = sum();
        skip();
        Node::Rel rel;
        if (accept('<')) {
            rel = accept('=') ? Node::Rel::le : Node::Rel::lt;
        } else if (accept('>')) {
            rel = accept('=') ? Node::Rel::ge : Node::Rel::gt;
        } else {
            fail("expected comparison in piecewise condition");
        }
        NodePtr rhs = sum();
        expect(',');
        NodePtr then_branch = sum();
        expect(',');
        NodePtr else_branch = sum();
        expect(')');
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::piecewise;
        n->rel = rel;
        n->args = {lhs, rhs, then_branch, else_branch};
        return n;
    }
};

}  // namespace

Expression::Expression(std::string source, std::shared_ptr<const Node> root)
    : source_(std::move(source)), root_(std::move(root))
{
}

Expression Expression::parse(std::string_view text)
{
    Parser p(text);
    return Expression(std::string(text), p.parse());
}

double Expression::operator()(double u) const
{
    return root_->eval(u);
}

}  // namespace nep
