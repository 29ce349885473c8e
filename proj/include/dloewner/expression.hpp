#ifndef DLOEWNER_EXPRESSION_HPP
#define DLOEWNER_EXPRESSION_HPP

#include <cctype>
#include <charconv>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "error.hpp"
#include "types.hpp"

namespace dloewner
{

///
/// Scalar transfer function expressions in the complex variable `s`.
///
/// Grammar (whitespace is insignificant):
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | 's' | 'exp' '(' expr ')' | '(' expr ')' | '-' base
///
/// Note that `-s^2` parses as `(-s)^2`, as the grammar dictates.
///
/// Evaluation propagates (value, derivative) pairs through the tree, so the
/// derivative is exact up to rounding (sum, product, quotient, power and
/// chain rules).
///
class Expression
{
public:
    /// Value and first derivative with respect to s.
    struct Jet
    {
        Complex value;
        Complex derivative;
    };

    static Expression parse(std::string_view text)
    {
        Parser p{text, 0};
        NodePtr root = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size())
            throw ParseError("unexpected character '" + std::string(1, text[p.pos]) + "'",
                             p.pos);
        return Expression(std::move(root), std::string(text));
    }

    Complex value(Complex s) const { return eval(s).value; }
    Complex derivative(Complex s) const { return eval(s).derivative; }

    Jet eval(Complex s) const
    {
        Jet j = eval_node(*root_, s);
        if (!std::isfinite(j.value.real()) || !std::isfinite(j.value.imag()))
            throw PoleError(s);
        return j;
    }

    const std::string& text() const noexcept { return text_; }

private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Number { Complex value; };
    struct Variable {};
    struct Negate { NodePtr arg; };
    struct Binary { char op; NodePtr lhs; NodePtr rhs; };
    struct Power { NodePtr base; int exponent; };
    struct Exponential { NodePtr arg; };

    struct Node
    {
        std::variant<Number, Variable, Negate, Binary, Power, Exponential> data;
    };

    template <typename T>
    static NodePtr make(T t)
    {
        return std::make_shared<const Node>(Node{std::move(t)});
    }

    Expression(NodePtr root, std::string text)
        : root_(std::move(root)), text_(std::move(text))
    {
    }

    static Jet eval_node(const Node& node, Complex s)
    {
        return std::visit(
            [s](const auto& n) -> Jet {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Number>)
                    return {n.value, 0.0};
                else if constexpr (std::is_same_v<T, Variable>)
                    return {s, 1.0};
                else if constexpr (std::is_same_v<T, Negate>)
                {
                    Jet a = eval_node(*n.arg, s);
                    return {-a.value, -a.derivative};
                }
                else if constexpr (std::is_same_v<T, Exponential>)
                {
                    Jet a   = eval_node(*n.arg, s);
                    Complex e = std::exp(a.value);
                    return {e, e * a.derivative};
                }
                else if constexpr (std::is_same_v<T, Power>)
                {
                    Jet a = eval_node(*n.base, s);
                    if (n.exponent == 0)
                        return {1.0, 0.0};
                    if (n.exponent < 0 && a.value == Complex(0.0))
                        throw PoleError(s);
                    Complex pm1 = ipow(a.value, n.exponent - 1);
                    return {pm1 * a.value,
                            static_cast<double>(n.exponent) * pm1 * a.derivative};
                }
                else
                {
                    Jet a = eval_node(*n.lhs, s);
                    Jet b = eval_node(*n.rhs, s);
                    switch (n.op)
                    {
                    case '+':
                        return {a.value + b.value, a.derivative + b.derivative};
                    case '-':
                        return {a.value - b.value, a.derivative - b.derivative};
                    case '*':
                        return {a.value * b.value,
                                a.derivative * b.value + a.value * b.derivative};
                    default: {
                        if (b.value == Complex(0.0))
                            throw PoleError(s);
                        Complex q = a.value / b.value;
                        return {q, (a.derivative - q * b.derivative) / b.value};
                    }
                    }
                }
            },
            node.data);
    }

    static Complex ipow(Complex x, int n)
    {
        if (n < 0)
            return 1.0 / ipow(x, -n);
        Complex result = 1.0;
        while (n > 0)
        {
            if (n & 1)
                result *= x;
            x *= x;
            n >>= 1;
        }
        return result;
    }

    struct Parser
    {
        std::string_view text;
        std::size_t pos;

        void skip_ws()
        {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                ++pos;
        }

        bool accept(char c)
        {
            skip_ws();
            if (pos < text.size() && text[pos] == c)
            {
                ++pos;
                return true;
            }
            return false;
        }

        void expect(char c)
        {
            if (!accept(c))
                throw ParseError(std::string("expected '") + c + "'", pos);
        }

        NodePtr parse_expr()
        {
            NodePtr lhs = parse_term();
            for (;;)
            {
                if (accept('+'))
                    lhs = make(Binary{'+', lhs, parse_term()});
                else if (accept('-'))
                    lhs = make(Binary{'-', lhs, parse_term()});
                else
                    return lhs;
            }
        }

        NodePtr parse_term()
        {
            NodePtr lhs = parse_factor();
            for (;;)
            {
                if (accept('*'))
                    lhs = make(Binary{'*', lhs, parse_factor()});
                else if (accept('/'))
                    lhs = make(Binary{'/', lhs, parse_factor()});
                else
                    return lhs;
            }
        }

        NodePtr parse_factor()
        {
            NodePtr base = parse_base();
            if (accept('^'))
                return make(Power{base, parse_integer()});
            return base;
        }

        int parse_integer()
        {
            skip_ws();
            const std::size_t start = pos;
            bool negative = false;
            if (pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
            {
                negative = text[pos] == '-';
                ++pos;
            }
            const std::size_t digits = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (pos == digits)
                throw ParseError("expected integer exponent", start);
            int value = 0;
            auto [ptr, ec] = std::from_chars(text.data() + digits, text.data() + pos, value);
            if (ec != std::errc())
                throw ParseError("integer exponent out of range", start);
            return negative ? -value : value;
        }

        NodePtr parse_base()
        {
            skip_ws();
            if (pos >= text.size())
                throw ParseError("unexpected end of expression", pos);
            const char c = text[pos];
            if (c == '-')
            {
                ++pos;
                return make(Negate{parse_base()});
            }
            if (c == '(')
            {
                ++pos;
                NodePtr inner = parse_expr();
                expect(')');
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)))
            {
                const std::size_t start = pos;
                while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
                    ++pos;
                const std::string_view word = text.substr(start, pos - start);
                if (word == "s")
                    return make(Variable{});
                if (word == "exp")
                {
                    expect('(');
                    NodePtr arg = parse_expr();
                    expect(')');
                    return make(Exponential{arg});
                }
                throw ParseError("unknown identifier '" + std::string(word) + "'", start);
            }
            throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }

        NodePtr parse_number()
        {
            const std::size_t start = pos;
            auto digits = [&] {
                std::size_t n = 0;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                {
                    ++pos;
                    ++n;
                }
                return n;
            };
            std::size_t n = digits();
            if (pos < text.size() && text[pos] == '.')
            {
                ++pos;
                n += digits();
            }
            if (n == 0)
                throw ParseError("malformed number", start);
            if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E'))
            {
                std::size_t save = pos++;
                if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
                    ++pos;
                if (digits() == 0)
                    pos = save; // not an exponent, leave 'e' for the caller
            }
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
            if (ec != std::errc() || ptr != text.data() + pos)
                throw ParseError("malformed number", start);
            return make(Number{Complex(value, 0.0)});
        }
    };

    NodePtr root_;
    std::string text_;
};

} // namespace dloewner

#endif /* DLOEWNER_EXPRESSION_HPP */
