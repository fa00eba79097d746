#pragma once

// Tiny arithmetic grammar for boundary densities ρ(t) over one boundary parameter t:
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := ('-' | '+') factor | number | 't' | 'pi' | ('cos' | 'sin') '(' expr ')' | '(' expr ')'

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bisteklov {

class WeightExpr {
public:
    static WeightExpr parse(std::string_view text) {
        Parser p{text, 0};
        auto root = p.expr();
        p.skip_space();
        if (p.pos != text.size())
            throw std::invalid_argument("weight expression: unexpected '" +
                                        std::string(text.substr(p.pos)) + "'");
        return WeightExpr(std::move(root), std::string(text));
    }

    double operator()(double t) const { return root_->eval(t); }

    /// The value when the expression does not mention t.
    std::optional<double> constant_value() const {
        if (root_->depends_on_t()) return std::nullopt;
        return root_->eval(0.0);
    }

    const std::string& text() const { return text_; }

private:
    struct Node {
        enum class Kind { Number, Param, Neg, Add, Sub, Mul, Div, Cos, Sin } kind;
        double number = 0.0;
        std::shared_ptr<const Node> lhs, rhs;

        double eval(double t) const {
            switch (kind) {
                case Kind::Number: return number;
                case Kind::Param: return t;
                case Kind::Neg: return -lhs->eval(t);
                case Kind::Add: return lhs->eval(t) + rhs->eval(t);
                case Kind::Sub: return lhs->eval(t) - rhs->eval(t);
                case Kind::Mul: return lhs->eval(t) * rhs->eval(t);
                case Kind::Div: return lhs->eval(t) / rhs->eval(t);
                case Kind::Cos: return std::cos(lhs->eval(t));
                case Kind::Sin: return std::sin(lhs->eval(t));
            }
            return 0.0;
        }

        bool depends_on_t() const {
            if (kind == Kind::Param) return true;
            return (lhs && lhs->depends_on_t()) || (rhs && rhs->depends_on_t());
        }
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Parser {
        std::string_view s;
        std::size_t pos;

        void skip_space() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }

        bool accept(char c) {
            skip_space();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        static NodePtr make(Node::Kind k, NodePtr a = {}, NodePtr b = {}) {
            return std::make_shared<const Node>(Node{k, 0.0, std::move(a), std::move(b)});
        }

        NodePtr expr() {
            NodePtr lhs = term();
            while (true) {
                if (accept('+')) lhs = make(Node::Kind::Add, lhs, term());
                else if (accept('-')) lhs = make(Node::Kind::Sub, lhs, term());
                else return lhs;
            }
        }

        NodePtr term() {
            NodePtr lhs = factor();
            while (true) {
                if (accept('*')) lhs = make(Node::Kind::Mul, lhs, factor());
                else if (accept('/')) lhs = make(Node::Kind::Div, lhs, factor());
                else return lhs;
            }
        }

        NodePtr factor() {
            skip_space();
            if (accept('-')) return make(Node::Kind::Neg, factor());
            if (accept('+')) return factor();
            if (accept('(')) {
                NodePtr inner = expr();
                if (!accept(')')) fail("expected ')'");
                return inner;
            }
            if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
                return number();
            std::size_t start = pos;
            while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
            const std::string_view word = s.substr(start, pos - start);
            if (word == "t") return make(Node::Kind::Param);
            if (word == "pi") {
                auto node = std::make_shared<Node>(Node{Node::Kind::Number});
                node->number = std::numbers::pi;
                return node;
            }
            if (word == "cos" || word == "sin") {
                if (!accept('(')) fail("expected '(' after " + std::string(word));
                NodePtr arg = expr();
                if (!accept(')')) fail("expected ')'");
                return make(word == "cos" ? Node::Kind::Cos : Node::Kind::Sin, arg);
            }
            pos = start;
            fail(word.empty() ? "expected a value" : "unknown name '" + std::string(word) + "'");
        }

        NodePtr number() {
            double value = 0.0;
            const char* first = s.data() + pos;
            auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
            if (ec != std::errc{}) fail("malformed number");
            pos += static_cast<std::size_t>(ptr - first);
            auto node = std::make_shared<Node>(Node{Node::Kind::Number});
            node->number = value;
            return node;
        }

        [[noreturn]] void fail(const std::string& what) const {
            throw std::invalid_argument("weight expression: " + what + " at position " +
                                        std::to_string(pos));
        }
    };

    WeightExpr(NodePtr root, std::string text) : root_(std::move(root)), text_(std::move(text)) {}

    NodePtr root_;
    std::string text_;
};

}  // namespace bisteklov
