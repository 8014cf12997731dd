#pragma once

#include "cdga/rational.hpp"
#include "cdga/signature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdga {

// Exponent vector; one slot per generator, in signature order.
using Exponents = std::vector<int>;

// Term-order data shared by every Element of one algebra.
//
// The order is degree-weighted graded reverse lexicographic: higher weighted
// total degree wins; ties are broken by scanning exponents across the even
// slots (in signature order) and then the odd slots, where the first slot
// that differs awards the *larger* monomial to the *smaller* exponent.  Odd
// generators therefore rank after (more significant than) even ones.
//
// elim_slot >= 0 designates one generator whose exponent is compared first
// and which is skipped by the graded comparison; this turns the order into
// an elimination order for that generator.
struct OrderContext {
    Signature sig;
    std::vector<int> weights;
    std::vector<bool> odd;
    int elim_slot = -1;

    explicit OrderContext(Signature s, int elim = -1) : sig(std::move(s)), elim_slot(elim) {
        weights.reserve(sig.size());
        odd.reserve(sig.size());
        for (std::size_t i = 0; i < sig.size(); ++i) {
            weights.push_back(sig[i].degree);
            odd.push_back(sig[i].is_odd());
        }
        if (elim_slot >= static_cast<int>(sig.size()))
            throw std::invalid_argument("elimination slot out of range");
    }
};

inline long long weighted_degree(const Exponents& e, const OrderContext& ctx) {
    long long d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += static_cast<long long>(e[i]) * ctx.weights[i];
    return d;
}

inline int compare_monomials(const Exponents& a, const Exponents& b, const OrderContext& ctx) {
    const int t = ctx.elim_slot;
    if (t >= 0 && a[t] != b[t]) return a[t] < b[t] ? -1 : 1;
    long long da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (static_cast<int>(i) == t) continue;
        da += static_cast<long long>(a[i]) * ctx.weights[i];
        db += static_cast<long long>(b[i]) * ctx.weights[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (int pass = 0; pass < 2; ++pass) {
        const bool want_odd = pass == 1;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (static_cast<int>(i) == t || ctx.odd[i] != want_odd) continue;
            if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        }
    }
    return 0;
}

struct MonoLess {
    const OrderContext* ctx = nullptr;
    bool operator()(const Exponents& a, const Exponents& b) const {
        return compare_monomials(a, b, *ctx) < 0;
    }
};

// Product of two canonical monomials.  Returns sign 0 when an odd generator
// repeats; otherwise +1/-1 per the Koszul convention: each odd factor of `a`
// passes every odd factor of `b` sitting at a strictly smaller slot.
inline int mono_mul(const Exponents& a, const Exponents& b, const OrderContext& ctx, Exponents& out) {
    int flips = 0;
    int b_odd_seen = 0;
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ctx.odd[i]) {
            if (a[i] && b[i]) return 0;
            if (a[i]) flips += b_odd_seen;
            if (b[i]) ++b_odd_seen;
        }
        out[i] = a[i] + b[i];
    }
    return flips % 2 == 0 ? 1 : -1;
}

using TermMap = std::map<Exponents, Rational, MonoLess>;

class Element {
public:
    Element() = default;

    Element(std::shared_ptr<const OrderContext> ctx)
        : ctx_(std::move(ctx)), terms_(MonoLess{ctx_.get()}) {}

    bool valid() const { return ctx_ != nullptr; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    const Signature& signature() const { return context().sig; }
    const OrderContext& context() const {
        if (!ctx_) throw std::logic_error("operation on default-constructed element");
        return *ctx_;
    }
    std::shared_ptr<const OrderContext> context_ptr() const { return ctx_; }

    const TermMap& terms() const { return terms_; }

    Rational coefficient(const Exponents& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Exponents& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const Exponents& leading_monomial() const {
        if (terms_.empty()) throw std::invalid_argument("leading monomial of zero");
        return terms_.rbegin()->first;
    }
    const Rational& leading_coefficient() const {
        if (terms_.empty()) throw std::invalid_argument("leading coefficient of zero");
        return terms_.rbegin()->second;
    }
    Element leading_term() const {
        Element r(ctx_);
        if (!terms_.empty()) r.add_term(terms_.rbegin()->first, terms_.rbegin()->second);
        return r;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        const long long d = weighted_degree(terms_.begin()->first, *ctx_);
        for (const auto& [m, c] : terms_)
            if (weighted_degree(m, *ctx_) != d) return false;
        return true;
    }

    // Common degree of all terms; nullopt when inhomogeneous or zero.
    std::optional<int> cohomological_degree() const {
        if (terms_.empty()) return std::nullopt;
        const long long d = weighted_degree(terms_.begin()->first, *ctx_);
        for (const auto& [m, c] : terms_)
            if (weighted_degree(m, *ctx_) != d) return std::nullopt;
        return static_cast<int>(d);
    }

    int deg_in(std::size_t var) const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }

    // p = Σ_k coeff_wrt(p, var, k) · var^k, the coefficient written to the left.
    Element coeff_wrt(std::size_t var, int k) const {
        Element r(ctx_);
        for (const auto& [m, c] : terms_) {
            if (m[var] != k) continue;
            Exponents rest = m;
            rest[var] = 0;
            Rational coef = c;
            if (ctx_->odd[var] && k == 1) {
                int odd_after = 0;
                for (std::size_t j = var + 1; j < rest.size(); ++j)
                    if (ctx_->odd[j] && rest[j]) ++odd_after;
                if (odd_after % 2) coef = -coef;
            }
            r.add_term(rest, coef);
        }
        return r;
    }

    Element operator-() const {
        Element r(ctx_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Element& operator+=(const Element& o) {
        require_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        require_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }

    friend Element operator*(const Element& a, const Element& b) {
        a.require_compatible(b);
        Element r(a.ctx_);
        Exponents prod;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                const int sign = mono_mul(ma, mb, *a.ctx_, prod);
                if (sign == 0) continue;
                Rational coef = ca * cb;
                if (sign < 0) coef = -coef;
                r.add_term(prod, coef);
            }
        return r;
    }
    Element& operator*=(const Element& o) { return *this = *this * o; }

    Element& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }
    friend Element operator*(const Rational& s, Element e) { return e *= s; }
    friend Element operator*(Element e, const Rational& s) { return e *= s; }

    Element pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative element power");
        Element r(ctx_);
        r.add_term(Exponents(ctx_->sig.size(), 0), 1);
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    bool operator==(const Element& o) const {
        if (!ctx_ || !o.ctx_) return terms_.empty() && o.terms_.empty() && ctx_ == o.ctx_;
        if (ctx_ != o.ctx_ && !(ctx_->sig == o.ctx_->sig)) return false;
        if (terms_.size() != o.terms_.size()) return false;
        auto it = terms_.begin();
        auto jt = o.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt)
            if (it->first != jt->first || it->second != jt->second) return false;
        return true;
    }
    bool operator!=(const Element& o) const { return !(*this == o); }

    // Image under the algebra map fixing every generator but `var`.
    Element substitute(std::size_t var, const Element& expr) const {
        if (ctx_->odd[var]) throw std::invalid_argument("substitution for odd generators is out of scope");
        if (!expr.is_homogeneous() || (!expr.is_zero() && *expr.cohomological_degree() != ctx_->weights[var]))
            throw std::invalid_argument("substituted expression must be homogeneous of the generator's degree");
        int max_e = deg_in(var);
        std::vector<Element> powers;
        powers.push_back(Element(ctx_));
        powers.back().add_term(Exponents(ctx_->sig.size(), 0), 1);
        for (int k = 1; k <= max_e; ++k) powers.push_back(powers.back() * expr);
        Element r(ctx_);
        for (const auto& [m, c] : terms_) {
            const int e = m[var];
            if (e == 0) {
                r.add_term(m, c);
                continue;
            }
            Exponents left(ctx_->sig.size(), 0), right(ctx_->sig.size(), 0);
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (j < var) left[j] = m[j];
                if (j > var) right[j] = m[j];
            }
            Element lm(ctx_), rm(ctx_);
            lm.add_term(left, c);
            rm.add_term(right, 1);
            r += lm * powers[e] * rm;
        }
        return r;
    }

private:
    void require_compatible(const Element& o) const {
        if (!ctx_ || !o.ctx_) throw std::logic_error("operation on default-constructed element");
        if (ctx_ == o.ctx_) return;
        if (!(ctx_->sig == o.ctx_->sig) || ctx_->elim_slot != o.ctx_->elim_slot)
            throw std::invalid_argument("signature mismatch");
    }

    std::shared_ptr<const OrderContext> ctx_;
    TermMap terms_{MonoLess{nullptr}};
};

// Handle to one free graded-commutative algebra; factory for its elements.
class Algebra {
public:
    Algebra() = default;
    explicit Algebra(Signature sig, int elim_slot = -1)
        : ctx_(std::make_shared<OrderContext>(std::move(sig), elim_slot)) {}

    const Signature& signature() const { return ctx_->sig; }
    const OrderContext& context() const { return *ctx_; }
    std::shared_ptr<const OrderContext> context_ptr() const { return ctx_; }
    std::size_t size() const { return ctx_->sig.size(); }

    Element zero() const { return Element(ctx_); }

    Element constant(const Rational& c) const {
        Element e(ctx_);
        e.add_term(Exponents(size(), 0), c);
        return e;
    }
    Element one() const { return constant(1); }

    Element generator(std::size_t i) const {
        if (i >= size()) throw std::invalid_argument("generator index out of range");
        Exponents m(size(), 0);
        m[i] = 1;
        Element e(ctx_);
        e.add_term(m, 1);
        return e;
    }
    Element generator(const std::string& name) const { return generator(ctx_->sig.index_of(name)); }

    Element monomial(const Exponents& m, const Rational& c = 1) const {
        if (m.size() != size()) throw std::invalid_argument("exponent vector size mismatch");
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] < 0) throw std::invalid_argument("negative exponent");
            if (ctx_->odd[i] && m[i] > 1) throw std::invalid_argument("odd generator squared");
        }
        Element e(ctx_);
        e.add_term(m, c);
        return e;
    }

    // All monomials of the given cohomological degree.  Throws length_error
    // when more than `cap` monomials exist.
    std::vector<Exponents> monomial_basis(int degree, std::size_t cap = 20000) const {
        std::vector<Exponents> out;
        Exponents cur(size(), 0);
        enumerate(0, degree, cur, out, cap);
        return out;
    }

private:
    void enumerate(std::size_t slot, int remaining, Exponents& cur, std::vector<Exponents>& out,
                   std::size_t cap) const {
        if (remaining == 0) {
            if (out.size() >= cap) throw std::length_error("monomial basis exceeds cap");
            out.push_back(cur);
            return;
        }
        if (slot >= size()) return;
        const int d = ctx_->weights[slot];
        const int max_e = ctx_->odd[slot] ? 1 : remaining / d;
        for (int e = 0; e <= max_e && e * d <= remaining; ++e) {
            cur[slot] = e;
            enumerate(slot + 1, remaining - e * d, cur, out, cap);
        }
        cur[slot] = 0;
    }

    std::shared_ptr<const OrderContext> ctx_;
};

// Extension of generator images to a degree-k derivation, applied to p.
// images[i] is the value on generator i and must live in the same algebra.
inline Element apply_derivation(const Element& p, const std::vector<Element>& images, int k) {
    const OrderContext& ctx = p.context();
    if (images.size() != ctx.sig.size())
        throw std::invalid_argument("derivation images must cover every generator");
    Element result(p.context_ptr());
    for (const auto& [m, c] : p.terms()) {
        long long prefix_degree = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const int e = m[i];
            if (e > 0) {
                if (!images[i].is_zero()) {
                    Exponents left(m.size(), 0), right(m.size(), 0);
                    for (std::size_t j = 0; j < m.size(); ++j) {
                        if (j < i) left[j] = m[j];
                        if (j > i) right[j] = m[j];
                    }
                    left[i] = e - 1;
                    Rational coef = c * e;
                    if ((static_cast<long long>(k) * prefix_degree) % 2 != 0) coef = -coef;
                    Element lm(p.context_ptr()), rm(p.context_ptr());
                    lm.add_term(left, coef);
                    rm.add_term(right, 1);
                    result += lm * images[i] * rm;
                }
                prefix_degree += static_cast<long long>(e) * ctx.weights[i];
            }
        }
    }
    return result;
}

// Extension of generator images to an algebra map, applied to p.  The images
// live in the target algebra; the term image is the product of generator
// images taken in signature order.
inline Element apply_algebra_map(const Element& p, const std::vector<Element>& images,
                                 const Algebra& target) {
    if (images.size() != p.context().sig.size())
        throw std::invalid_argument("map images must cover every generator");
    Element result = target.zero();
    for (const auto& [m, c] : p.terms()) {
        Element term = target.constant(c);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e < m[i]; ++e) term = term * images[i];
        result += term;
    }
    return result;
}

inline std::string format_rational(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// Canonical text: terms in descending monomial order, generators in
// signature order within a term, unit coefficients elided.
inline std::string to_string(const Element& p) {
    if (!p.valid() || p.is_zero()) return "0";
    const Signature& sig = p.signature();
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const Exponents& m = it->first;
        const Rational& c = it->second;
        const bool negative = c < 0;
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        const Rational abs_c = negative ? Rational(-c) : c;
        std::string factors;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += sig[i].name;
            if (m[i] > 1) factors += "^" + std::to_string(m[i]);
        }
        if (factors.empty()) {
            out += format_rational(abs_c);
        } else if (abs_c == 1) {
            out += factors;
        } else {
            out += format_rational(abs_c) + "*" + factors;
        }
    }
    return out;
}

}  // namespace cdga
