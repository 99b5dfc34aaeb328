#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "term.hpp"

namespace pcqe {

struct ParseOptions {
    // Names ending in the purification suffixes are rejected unless set; the
    // elimination backends exchange formulas that contain such names.
    bool allow_reserved_names = false;
};

namespace detail {

enum class Tok {
    End,
    Ident,
    Int,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Dot,
    EqEq,
    Neq,
    Le,
    Lt,
    Ge,
    Gt,
    Arrow,
    DArrow,
    KwAnd,
    KwOr,
    KwNot,
    KwForall,
    KwExists,
    KwTop,
    KwBot,
    KwImag,
    KwRe,
    KwIm,
    KwConj,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            if (i_ >= src_.size()) {
                out.push_back({Tok::End, "", i_});
                return out;
            }
            std::size_t start = i_;
            char c = src_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
                    num += src_[i_++];
                out.push_back({Tok::Int, num, start});
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string id;
                while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                            src_[i_] == '_'))
                    id += src_[i_++];
                out.push_back({keyword(id), id, start});
                continue;
            }
            auto two = src_.substr(i_, 2);
            auto three = src_.substr(i_, 3);
            if (three == "<->") {
                out.push_back({Tok::DArrow, "<->", start});
                i_ += 3;
            } else if (two == "->") {
                out.push_back({Tok::Arrow, "->", start});
                i_ += 2;
            } else if (two == "==") {
                out.push_back({Tok::EqEq, "==", start});
                i_ += 2;
            } else if (two == "!=") {
                out.push_back({Tok::Neq, "!=", start});
                i_ += 2;
            } else if (two == "<=") {
                out.push_back({Tok::Le, "<=", start});
                i_ += 2;
            } else if (two == ">=") {
                out.push_back({Tok::Ge, ">=", start});
                i_ += 2;
            } else {
                Tok k;
                switch (c) {
                    case '(': k = Tok::LParen; break;
                    case ')': k = Tok::RParen; break;
                    case '+': k = Tok::Plus; break;
                    case '-': k = Tok::Minus; break;
                    case '*': k = Tok::Star; break;
                    case '^': k = Tok::Caret; break;
                    case '/': k = Tok::Slash; break;
                    case '.': k = Tok::Dot; break;
                    case '<': k = Tok::Lt; break;
                    case '>': k = Tok::Gt; break;
                    case '=':
                        throw SyntaxError("use '==' for equations", start);
                    default:
                        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
                }
                out.push_back({k, std::string(1, c), start});
                ++i_;
            }
        }
    }

private:
    static Tok keyword(const std::string& id) {
        if (id == "and") return Tok::KwAnd;
        if (id == "or") return Tok::KwOr;
        if (id == "not") return Tok::KwNot;
        if (id == "forall") return Tok::KwForall;
        if (id == "exists") return Tok::KwExists;
        if (id == "T") return Tok::KwTop;
        if (id == "F") return Tok::KwBot;
        if (id == "I") return Tok::KwImag;
        if (id == "Re") return Tok::KwRe;
        if (id == "Im") return Tok::KwIm;
        if (id == "conj") return Tok::KwConj;
        return Tok::Ident;
    }

    void skip_ws() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    }

    std::string_view src_;
    std::size_t i_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, ParseOptions opts)
        : toks_(Lexer(src).run()), opts_(opts) {}

    Formula parse_formula_all() {
        Formula f = parse_iff();
        expect(Tok::End, "end of input");
        return f;
    }

    Term parse_term_all() {
        Term t = parse_term();
        expect(Tok::End, "end of input");
        return t;
    }

    Formula parse_atom_all() {
        Formula f = parse_atom();
        expect(Tok::End, "end of input");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k))
            throw SyntaxError(std::string("expected ") + what + ", found '" + peek().text + "'",
                              peek().pos);
    }

    // --- formulas -------------------------------------------------------

    Formula parse_iff() {
        Formula lhs = parse_impl();
        if (accept(Tok::DArrow)) return fm::iff(std::move(lhs), parse_iff());
        return lhs;
    }

    Formula parse_impl() {
        Formula lhs = parse_or();
        if (accept(Tok::Arrow)) return fm::implies(std::move(lhs), parse_impl());
        return lhs;
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (accept(Tok::KwOr)) parts.push_back(parse_and());
        return parts.size() == 1 ? parts[0] : fm::disjunction(std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_unary()};
        while (accept(Tok::KwAnd)) parts.push_back(parse_unary());
        return parts.size() == 1 ? parts[0] : fm::conjunction(std::move(parts));
    }

    Formula parse_unary() {
        if (accept(Tok::KwNot)) return fm::negation(parse_unary());
        if (peek().kind == Tok::KwForall || peek().kind == Tok::KwExists) {
            bool universal = next().kind == Tok::KwForall;
            const Token& name = peek();
            expect(Tok::Ident, "variable name");
            Variable v = make_variable(name);
            expect(Tok::Dot, "'.'");
            Formula body = parse_iff();
            return universal ? fm::forall(std::move(v), std::move(body))
                             : fm::exists(std::move(v), std::move(body));
        }
        if (accept(Tok::KwTop)) return fm::top();
        if (accept(Tok::KwBot)) return fm::bot();
        if (peek().kind == Tok::LParen) {
            // '(' may open a parenthesized formula or a term; try the formula
            // reading first and fall back on failure.
            std::size_t save = pos_;
            try {
                ++pos_;
                Formula f = parse_iff();
                expect(Tok::RParen, "')'");
                if (is_term_continuation(peek().kind))
                    throw SyntaxError("term context", peek().pos);
                return f;
            } catch (const SyntaxError&) {
                pos_ = save;
            }
            return parse_atom();
        }
        return parse_atom();
    }

    static bool is_term_continuation(Tok k) {
        switch (k) {
            case Tok::Plus:
            case Tok::Minus:
            case Tok::Star:
            case Tok::Caret:
            case Tok::Slash:
            case Tok::EqEq:
            case Tok::Neq:
            case Tok::Le:
            case Tok::Lt:
            case Tok::Ge:
            case Tok::Gt:
                return true;
            default:
                return false;
        }
    }

    Formula parse_atom() {
        Term lhs = parse_term();
        RelOp rel;
        bool swap = false;
        switch (peek().kind) {
            case Tok::EqEq: rel = RelOp::EQ; break;
            case Tok::Neq: rel = RelOp::NE; break;
            case Tok::Le: rel = RelOp::LE; break;
            case Tok::Lt: rel = RelOp::LT; break;
            case Tok::Ge:
                rel = RelOp::LE;
                swap = true;
                break;
            case Tok::Gt:
                rel = RelOp::LT;
                swap = true;
                break;
            default:
                throw SyntaxError("expected a relation symbol, found '" + peek().text + "'",
                                  peek().pos);
        }
        ++pos_;
        Term rhs = parse_term();
        if (swap) std::swap(lhs, rhs);
        return fm::atom(std::move(lhs), rel, std::move(rhs));
    }

    // --- terms ----------------------------------------------------------

    Term parse_term() { return parse_additive(); }

    Term parse_additive() {
        Term lhs = parse_negation();
        while (true) {
            if (accept(Tok::Plus)) {
                lhs = tm::add(std::move(lhs), parse_negation());
            } else if (accept(Tok::Minus)) {
                lhs = tm::sub(std::move(lhs), parse_negation());
            } else {
                return lhs;
            }
        }
    }

    Term parse_negation() {
        if (accept(Tok::Minus)) return tm::neg(parse_negation());
        return parse_multiplicative();
    }

    Term parse_multiplicative() {
        Term lhs = parse_power();
        while (accept(Tok::Star)) {
            // Tolerate a sign directly after '*'.
            if (peek().kind == Tok::Minus) {
                ++pos_;
                lhs = tm::mul(std::move(lhs), tm::neg(parse_power()));
            } else {
                lhs = tm::mul(std::move(lhs), parse_power());
            }
        }
        return lhs;
    }

    Term parse_power() {
        Term base = parse_primary();
        if (accept(Tok::Caret)) {
            const Token& e = peek();
            expect(Tok::Int, "integer exponent");
            unsigned long long v = std::stoull(e.text);
            if (v > 0xffffffffull) throw SyntaxError("exponent too large", e.pos);
            return tm::pow(std::move(base), static_cast<std::uint32_t>(v));
        }
        return base;
    }

    Term parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                ++pos_;
                Integer num(t.text);
                if (peek().kind == Tok::Slash && toks_[pos_ + 1].kind == Tok::Int) {
                    ++pos_;
                    Integer den(next().text);
                    if (den == 0) throw SyntaxError("zero denominator", t.pos);
                    return tm::constant(Rational(num, den));
                }
                return tm::constant(Rational(num));
            }
            case Tok::KwImag:
                ++pos_;
                return tm::imag();
            case Tok::Ident: {
                ++pos_;
                return tm::variable(make_variable(t));
            }
            case Tok::KwRe:
            case Tok::KwIm:
            case Tok::KwConj: {
                Tok k = next().kind;
                expect(Tok::LParen, "'('");
                Term arg = parse_term();
                expect(Tok::RParen, "')'");
                if (k == Tok::KwRe) return tm::re(std::move(arg));
                if (k == Tok::KwIm) return tm::im(std::move(arg));
                return tm::conj(std::move(arg));
            }
            case Tok::LParen: {
                ++pos_;
                Term inner = parse_term();
                expect(Tok::RParen, "')'");
                return inner;
            }
            default:
                throw SyntaxError("expected a term, found '" + t.text + "'", t.pos);
        }
    }

    Variable make_variable(const Token& t) const {
        if (!opts_.allow_reserved_names && has_reserved_suffix(t.text))
            throw SyntaxError("variable name uses a reserved suffix: " + t.text, t.pos);
        return Variable(t.text);
    }

    std::vector<Token> toks_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Formula parse_formula(std::string_view text, ParseOptions opts = {}) {
    return detail::Parser(text, opts).parse_formula_all();
}

inline Term parse_term(std::string_view text, ParseOptions opts = {}) {
    return detail::Parser(text, opts).parse_term_all();
}

// A single atom, as used in assumption lists.
inline Atom parse_atom(std::string_view text, ParseOptions opts = {}) {
    return detail::Parser(text, opts).parse_atom_all()->atom;
}

} // namespace pcqe
