/**
 * @file parse.cpp
 * @brief Lexer, recursive-descent parser, and canonical printer.
 *
 * Precedence, loosest to tightest: binders/lets/case, arrow (right
 * associative), sum, tensor (both left associative), application, atoms.
 * Binder annotations sit at application level, so arrow/sum/tensor
 * annotations need parentheses.  Grade literals are resolved against the
 * active semiring at parse time.
 */
#include "grad/parse.hpp"

#include <fmt/format.h>

#include <cctype>
#include <vector>

#include "grad/error.hpp"
#include "grad/program.hpp"

namespace grad {

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '%' || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        int l = line, co = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_cont(text[j])) ++j;
            out.push_back({Tok::Ident, text.substr(i, j - i), l, co});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Number, text.substr(i, j - i), l, co});
            advance(j - i);
            continue;
        }
        static const std::string syms = "\\.:(),;*+->=";
        if (syms.find(c) != std::string::npos) {
            out.push_back({Tok::Sym, std::string(1, c), l, co});
            advance(1);
            continue;
        }
        throw ParseError(fmt::format("unexpected character '{}'", c), line, col);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

/// Keywords that can never begin or continue an application.
bool reserved_nonatom(const std::string& s) {
    return s == "let" || s == "in" || s == "of" || s == "case" || s == "box" ||
           s == "inj1" || s == "inj2" || s == "Pi" || s == "Sigma" || s == "def" ||
           s == "main";
}

struct Parser {
    const std::vector<Token>& ts;
    const Semiring& sr;
    std::size_t pos = 0;

    const Token& peek(std::size_t ahead = 0) const {
        return ts[std::min(pos + ahead, ts.size() - 1)];
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : fmt::format("'{}'", t.text);
        throw ParseError(fmt::format("{}, found {}", msg, got), t.line, t.col);
    }
    bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
    bool at_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
    Token eat() { return ts[pos++]; }
    void expect_sym(const char* s) {
        if (!at_sym(s)) fail(fmt::format("expected '{}'", s));
        ++pos;
    }
    std::string expect_ident() {
        if (peek().kind != Tok::Ident || reserved_nonatom(peek().text) ||
            peek().text == "Type" || peek().text == "Unit" || peek().text == "unit")
            fail("expected an identifier");
        return eat().text;
    }

    Grade grade() {
        const Token& t = peek();
        if (t.kind != Tok::Ident && t.kind != Tok::Number && !at_sym("*"))
            fail("expected a grade literal");
        auto q = sr.parse_grade(t.text);
        if (!q)
            throw ParseError(fmt::format("unknown grade literal '{}' for semiring {}",
                                         t.text, sr.name()),
                             t.line, t.col);
        ++pos;
        return *q;
    }

    bool atom_start() const {
        const Token& t = peek();
        if (t.kind == Tok::Ident) return !reserved_nonatom(t.text);
        return t.kind == Tok::Sym && t.text == "(";
    }

    TermPtr atom() {
        const Token& t = peek();
        if (t.kind == Tok::Sym && t.text == "(") {
            ++pos;
            auto first = term();
            if (at_sym(",")) {
                ++pos;
                auto second = term();
                expect_sym(")");
                return mk::pair(first, second);
            }
            expect_sym(")");
            return first;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "Type") return ++pos, mk::type_sort();
            if (t.text == "Unit") return ++pos, mk::unit_ty();
            if (t.text == "unit") return ++pos, mk::unit_val();
            if (reserved_nonatom(t.text)) fail("expected a term");
            return mk::var(eat().text);
        }
        fail("expected a term");
    }

    TermPtr app() {
        if (at_kw("inj1") || at_kw("inj2")) {
            bool left = eat().text == "inj1";
            auto payload = atom();
            return left ? mk::inj1(payload) : mk::inj2(payload);
        }
        if (at_kw("box")) {
            ++pos;
            Grade q = grade();
            return mk::box(q, atom());
        }
        auto t = atom();
        while (atom_start()) t = mk::app(t, atom());
        return t;
    }

    TermPtr tensor() {
        auto t = app();
        while (at_sym("*")) {
            ++pos;
            t = mk::tensor(sr.one(), t, app());
        }
        return t;
    }

    TermPtr sum() {
        auto t = tensor();
        while (at_sym("+")) {
            ++pos;
            t = mk::sum(t, tensor());
        }
        return t;
    }

    TermPtr arrow() {
        auto lhs = sum();
        if (!at_sym("-")) return lhs;
        ++pos;
        Grade q = at_sym(">") ? sr.one() : grade();
        expect_sym(">");
        return mk::arrow(q, lhs, term());
    }

    TermPtr binder(Tag which) {
        ++pos; // the introducing token
        std::string name = expect_ident();
        expect_sym(":");
        Grade q = grade();
        auto ann = app();
        expect_sym(".");
        auto body = term();
        switch (which) {
        case Tag::Lam: return mk::lam(name, q, ann, body);
        case Tag::Pi: return mk::pi(name, q, ann, body);
        default: return mk::sigma(name, q, ann, body);
        }
    }

    TermPtr lets() {
        ++pos; // 'let'
        if (at_kw("box")) {
            ++pos;
            std::string name = expect_ident();
            expect_sym("=");
            auto scrut = term();
            if (!at_kw("in")) fail("expected 'in'");
            ++pos;
            return mk::let_box(name, scrut, term());
        }
        if (at_kw("unit")) {
            ++pos;
            expect_sym("=");
            auto scrut = term();
            if (!at_kw("in")) fail("expected 'in'");
            ++pos;
            return mk::unit_elim(scrut, term());
        }
        if (at_sym("(")) {
            ++pos;
            std::string n1 = expect_ident();
            expect_sym(",");
            std::string n2 = expect_ident();
            expect_sym(")");
            expect_sym("=");
            auto scrut = term();
            if (!at_kw("in")) fail("expected 'in'");
            ++pos;
            return mk::sigma_elim(n1, n2, scrut, term());
        }
        fail("expected 'box', 'unit', or '(' after 'let'");
    }

    TermPtr term() {
        if (at_sym("\\")) return binder(Tag::Lam);
        if (at_kw("Pi")) return binder(Tag::Pi);
        if (at_kw("Sigma")) return binder(Tag::Sigma);
        if (at_kw("let")) return lets();
        if (at_kw("case")) {
            ++pos;
            Grade q = grade();
            auto scrut = app();
            if (!at_kw("of")) fail("expected 'of'");
            ++pos;
            auto b1 = term();
            expect_sym(";");
            auto b2 = term();
            return mk::case_of(q, scrut, b1, b2);
        }
        return arrow();
    }

    /// Can this token open a term?  Decides whether the token after a
    /// definition's ':' is an allowance annotation or already the type.
    static bool term_start(const Token& t) {
        if (t.kind == Tok::Sym) return t.text == "(" || t.text == "\\";
        if (t.kind != Tok::Ident) return false;
        return t.text != "in" && t.text != "of" && t.text != "def" && t.text != "main";
    }

    Def definition() {
        ++pos; // 'def'
        Def d;
        d.name = expect_ident();
        expect_sym(":");
        // `def x :q T = b` — a token counts as an allowance only if it is a
        // grade literal of the active semiring *and* a type still follows.
        const Token& g = peek();
        bool shaped = g.kind == Tok::Number || g.kind == Tok::Ident || at_sym("*");
        if (shaped && sr.parse_grade(g.text).has_value() && term_start(peek(1)))
            d.allowed = grade();
        d.type = term();
        expect_sym("=");
        d.body = term();
        return d;
    }

    Program program() {
        Program p;
        while (peek().kind != Tok::End) {
            if (at_kw("def")) {
                const Token& at = peek(1);
                Def d = definition();
                for (const auto& prev : p.defs)
                    if (prev.name == d.name)
                        throw ParseError(
                            fmt::format("duplicate definition '{}'", d.name), at.line,
                            at.col);
                p.defs.push_back(std::move(d));
                continue;
            }
            if (at_kw("main")) {
                const Token& at = peek();
                if (p.main)
                    throw ParseError("duplicate 'main' item", at.line, at.col);
                ++pos;
                expect_sym("=");
                p.main = term();
                continue;
            }
            fail("expected 'def' or 'main'");
        }
        return p;
    }
};

enum Level { LTerm = 0, LArrow = 1, LSum = 2, LTensor = 3, LApp = 4, LAtom = 5 };

int level_of(const TermPtr& t) {
    switch (t->tag) {
    case Tag::TypeSort:
    case Tag::Var:
    case Tag::Unit:
    case Tag::UnitVal:
    case Tag::Pair:
        return LAtom;
    case Tag::App:
    case Tag::Inj1:
    case Tag::Inj2:
    case Tag::Box:
        return LApp;
    case Tag::Tensor:
        return LTensor;
    case Tag::Sum:
        return LSum;
    case Tag::Arrow:
        return LArrow;
    default:
        return LTerm; // binders, lets, case
    }
}

void pp(std::string& out, const TermPtr& t, const Semiring& sr, int min_level);

void pp_wrapped(std::string& out, const TermPtr& t, const Semiring& sr, int min_level,
                bool force_parens = false) {
    if (force_parens || level_of(t) < min_level) {
        out += '(';
        pp(out, t, sr, LTerm);
        out += ')';
    } else {
        pp(out, t, sr, min_level);
    }
}

void pp(std::string& out, const TermPtr& t, const Semiring& sr, int) {
    switch (t->tag) {
    case Tag::TypeSort: out += "Type"; return;
    case Tag::Var: out += t->name; return;
    case Tag::Unit: out += "Unit"; return;
    case Tag::UnitVal: out += "unit"; return;
    case Tag::Pair:
        out += '(';
        pp(out, t->a, sr, LTerm);
        out += ", ";
        pp(out, t->b, sr, LTerm);
        out += ')';
        return;
    case Tag::App:
        // injections and boxes bind their payload tighter than application,
        // so as a function head they must be parenthesized
        pp_wrapped(out, t->a, sr, LApp,
                   t->a->tag == Tag::Inj1 || t->a->tag == Tag::Inj2 ||
                       t->a->tag == Tag::Box);
        out += ' ';
        pp_wrapped(out, t->b, sr, LAtom);
        return;
    case Tag::Inj1:
    case Tag::Inj2:
        out += t->tag == Tag::Inj1 ? "inj1 " : "inj2 ";
        pp_wrapped(out, t->a, sr, LAtom);
        return;
    case Tag::Box:
        out += "box " + sr.show(t->grade) + ' ';
        pp_wrapped(out, t->a, sr, LAtom);
        return;
    case Tag::Tensor:
        pp_wrapped(out, t->a, sr, LTensor);
        out += " * ";
        pp_wrapped(out, t->b, sr, LApp);
        return;
    case Tag::Sum:
        pp_wrapped(out, t->a, sr, LSum);
        out += " + ";
        pp_wrapped(out, t->b, sr, LTensor);
        return;
    case Tag::Arrow:
        pp_wrapped(out, t->a, sr, LSum);
        out += " -" + sr.show(t->grade) + "> ";
        pp_wrapped(out, t->b, sr, LArrow);
        return;
    case Tag::Lam:
    case Tag::Pi:
    case Tag::Sigma:
        out += t->tag == Tag::Lam ? "\\" : (t->tag == Tag::Pi ? "Pi " : "Sigma ");
        out += t->name + " :" + sr.show(t->grade) + ' ';
        pp_wrapped(out, t->a, sr, LApp);
        out += ". ";
        pp(out, t->b, sr, LTerm);
        return;
    case Tag::Case:
        out += "case " + sr.show(t->grade) + ' ';
        pp_wrapped(out, t->a, sr, LApp);
        out += " of ";
        pp(out, t->b, sr, LTerm);
        out += " ; ";
        pp(out, t->c, sr, LTerm);
        return;
    case Tag::UnitElim:
        out += "let unit = ";
        pp(out, t->a, sr, LTerm);
        out += " in ";
        pp(out, t->b, sr, LTerm);
        return;
    case Tag::SigmaElim:
        out += "let (" + t->name + ", " + t->name2 + ") = ";
        pp(out, t->a, sr, LTerm);
        out += " in ";
        pp(out, t->b, sr, LTerm);
        return;
    case Tag::LetBox:
        out += "let box " + t->name + " = ";
        pp(out, t->a, sr, LTerm);
        out += " in ";
        pp(out, t->b, sr, LTerm);
        return;
    }
}

} // namespace

TermPtr parse_term(const std::string& text, const Semiring& sr) {
    auto tokens = lex(text);
    Parser p{tokens, sr};
    auto t = p.term();
    if (p.peek().kind != Tok::End) p.fail("trailing input");
    return t;
}

Program parse_program(const std::string& text, const Semiring& sr) {
    auto tokens = lex(text);
    Parser p{tokens, sr};
    return p.program();
}

std::string print_term(const TermPtr& t, const Semiring& sr) {
    std::string out;
    pp(out, t, sr, LTerm);
    return out;
}

} // namespace grad
