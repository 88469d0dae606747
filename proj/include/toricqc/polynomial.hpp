#pragma once

// Sparse multivariate polynomials with exponent-vector keys, and a small
// expression parser ("1/3*p^2 - 2*p*h + 5") used by the config loader.

#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toricqc/error.hpp"
#include "toricqc/rational.hpp"

namespace toricqc {

using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

inline bool divides(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// Renders x^a*y^b with the given variable names, "1" for the empty monomial.
inline std::string format_monomial(const Monomial& m, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += i < names.size() ? names[i] : "H" + std::to_string(i + 1);
        if (m[i] != 1) out += "^" + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

template <typename Coeff>
class Polynomial {
public:
    using Terms = std::map<Monomial, Coeff>;

    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Coeff& c) {
        Polynomial p(nvars);
        p.add_term(Monomial(nvars, 0), c);
        return p;
    }
    static Polynomial variable(std::size_t nvars, std::size_t j) {
        Polynomial p(nvars);
        Monomial m(nvars, 0);
        m.at(j) = 1;
        p.add_term(m, Coeff(1));
        return p;
    }
    static Polynomial monomial(const Monomial& m, const Coeff& c) {
        Polynomial p(m.size());
        p.add_term(m, c);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Coeff coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Coeff(0) : it->second;
    }
    Coeff constant_term() const { return coeff(Monomial(nvars_, 0)); }

    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
        return d;
    }

    void add_term(const Monomial& m, const Coeff& c) {
        if (m.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "monomial arity mismatch");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        adopt_arity(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        adopt_arity(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial& operator*=(const Coeff& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Coeff(-1); }
    friend Polynomial operator*(Polynomial a, const Coeff& s) { return a *= s; }
    friend Polynomial operator*(const Coeff& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(std::max(a.nvars_, b.nvars_));
        if (!a.is_zero() && !b.is_zero() && a.nvars_ != b.nvars_)
            throw Error(ErrorCode::DimensionMismatch, "polynomial arity mismatch");
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial pow(int e) const {
        Polynomial r = constant(nvars_, Coeff(1));
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    /// Replaces variable j by images[j] (all images share one arity).
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (images.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "substitution arity mismatch");
        std::size_t out_vars = images.empty() ? 0 : images.front().nvars();
        Polynomial r(out_vars);
        for (const auto& [m, c] : terms_) {
            Polynomial t = constant(out_vars, c);
            for (std::size_t j = 0; j < nvars_; ++j)
                if (m[j]) t *= images[j].pow(m[j]);
            r += t;
        }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.terms_ == b.terms_;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            std::string mono = format_monomial(m, names);
            if (mono == "1") out += format_q(c);
            else if (c == 1) out += mono;
            else out += "(" + format_q(c) + ")*" + mono;
        }
        return out;
    }

private:
    void adopt_arity(const Polynomial& o) {
        if (terms_.empty() && nvars_ == 0) nvars_ = o.nvars_;
        if (!o.terms_.empty() && o.nvars_ != nvars_) throw Error(ErrorCode::DimensionMismatch, "polynomial arity mismatch");
    }

    std::size_t nvars_ = 0;
    Terms terms_;
};

using Poly = Polynomial<Q>;

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, const std::vector<std::string>& names) : text_(text), names_(names) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::ParseError,
                    why + " at offset " + std::to_string(pos_) + " in expression '" + std::string(text_) + "'");
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }
    Poly term() {
        Poly acc = power();
        for (;;) {
            if (accept('*')) {
                acc = acc * power();
            } else if (accept('/')) {
                Poly d = power();
                if (d.degree() > 0 || d.is_zero()) fail("division by a non-constant or zero");
                Q c = d.constant_term();
                acc *= Q(1) / c;
            } else {
                return acc;
            }
        }
    }
    Poly power() {
        Poly base = unary();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            base = base.pow(std::stoi(std::string(text_.substr(start, pos_ - start))));
        }
        return base;
    }
    Poly unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return primary();
    }
    Poly primary() {
        skip_ws();
        if (accept('(')) {
            Poly p = expr();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        if (pos_ >= text_.size()) fail("unexpected end");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return Poly::constant(names_.size(), Q(Z(std::string(text_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            for (std::size_t j = 0; j < names_.size(); ++j)
                if (names_[j] == name) return Poly::variable(names_.size(), j);
            fail("unknown symbol '" + name + "'");
        }
        fail("unexpected character");
    }

    std::string_view text_;
    const std::vector<std::string>& names_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a polynomial expression over the named variables. Integer literals
/// and '/' by constants give rational coefficients.
inline Poly parse_polynomial(std::string_view text, const std::vector<std::string>& names) {
    return detail::ExprParser(text, names).parse();
}

}  // namespace toricqc
