#pragma once

#include "cdga/element.hpp"
#include "cdga/linalg.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdga {

inline bool mono_divides(const Exponents& a, const Exponents& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exponents mono_lcm(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline Exponents mono_quotient(const Exponents& b, const Exponents& a) {
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

inline bool uses_only_even(const Element& p) {
    const OrderContext& ctx = p.context();
    for (const auto& [m, c] : p.terms())
        for (std::size_t i = 0; i < m.size(); ++i)
            if (ctx.odd[i] && m[i] != 0) return false;
    return true;
}

inline bool uses_slot(const Element& p, std::size_t slot) {
    for (const auto& [m, c] : p.terms())
        if (m[slot] != 0) return true;
    return false;
}

inline void require_even_polynomials(const std::vector<Element>& gens) {
    for (const Element& g : gens)
        if (!uses_only_even(g)) throw std::invalid_argument("odd variable present in ideal generator");
}

struct DivisionResult {
    Element remainder;
    std::vector<Element> cofactors;  // one per basis element
};

namespace detail {

// Working entry of the Buchberger loop: a polynomial together with its exact
// representation in terms of the original generators.
struct TrackedPoly {
    Element poly;
    std::vector<Element> rep;
};

// Full normal form of h against `items`; cofactors against items tracked.
// Divisor choice is deterministic: first item (in stored order) whose leading
// monomial divides the current leading term.
inline std::pair<Element, std::vector<Element>> normal_form(Element h,
                                                            const std::vector<const Element*>& items) {
    auto ctx = h.context_ptr();
    std::vector<Element> cofs(items.size(), Element(ctx));
    Element remainder(ctx);
    while (!h.is_zero()) {
        const Exponents& lm = h.leading_monomial();
        bool reduced = false;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const Element& g = *items[i];
            if (g.is_zero() || !mono_divides(g.leading_monomial(), lm)) continue;
            Element factor(ctx);
            factor.add_term(mono_quotient(lm, g.leading_monomial()),
                            h.leading_coefficient() / g.leading_coefficient());
            cofs[i] += factor;
            h -= factor * g;
            reduced = true;
            break;
        }
        if (!reduced) {
            remainder.add_term(lm, h.leading_coefficient());
            Element lt(ctx);
            lt.add_term(lm, h.leading_coefficient());
            h -= lt;
        }
    }
    return {std::move(remainder), std::move(cofs)};
}

}  // namespace detail

// Reduced Groebner basis of an ideal in the even subalgebra, remembering the
// original generators and an exact representation of each basis element as a
// combination of them.
class GroebnerBasis {
public:
    GroebnerBasis() = default;

    const std::vector<Element>& generators() const { return gens_; }
    const std::vector<Element>& basis() const { return basis_; }
    const std::vector<std::vector<Element>>& representations() const { return reps_; }
    std::shared_ptr<const OrderContext> context_ptr() const { return ctx_; }

    bool same_ideal_basis(const GroebnerBasis& o) const {
        if (basis_.size() != o.basis_.size()) return false;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] != o.basis_[i]) return false;
        return true;
    }

    bool contains_one() const { return basis_.size() == 1 && basis_[0].term_count() == 1 && !basis_[0].is_zero() && weighted_degree(basis_[0].leading_monomial(), basis_[0].context()) == 0; }

    friend GroebnerBasis groebner(const std::vector<Element>& gens,
                                  std::shared_ptr<const OrderContext> ctx);

private:
    std::shared_ptr<const OrderContext> ctx_;
    std::vector<Element> gens_;
    std::vector<Element> basis_;
    std::vector<std::vector<Element>> reps_;
};

// Buchberger's algorithm with Gebauer-Moeller pair pruning and normal
// selection strategy; the result is the unique reduced monic basis, sorted by
// ascending leading monomial.  `ctx` may be supplied for an empty generator
// list; otherwise it is taken from the first generator.
inline GroebnerBasis groebner(const std::vector<Element>& gens,
                              std::shared_ptr<const OrderContext> ctx = nullptr) {
    require_even_polynomials(gens);
    if (!ctx) {
        for (const Element& g : gens)
            if (g.valid()) {
                ctx = g.context_ptr();
                break;
            }
        if (!ctx) throw std::invalid_argument("groebner needs at least one valid element or a context");
    }

    GroebnerBasis out;
    out.ctx_ = ctx;
    out.gens_ = gens;

    std::vector<detail::TrackedPoly> g;
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].is_zero()) continue;
        detail::TrackedPoly tp;
        tp.poly = gens[j];
        tp.rep.assign(gens.size(), Element(ctx));
        tp.rep[j] = Element(ctx);
        tp.rep[j].add_term(Exponents(ctx->sig.size(), 0), 1);
        g.push_back(std::move(tp));
    }

    const auto lm = [&](std::size_t i) -> const Exponents& { return g[i].poly.leading_monomial(); };
    const auto coprime = [&](std::size_t i, std::size_t j) {
        const Exponents& a = lm(i);
        const Exponents& b = lm(j);
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k] > 0 && b[k] > 0) return false;
        return true;
    };

    using Pair = std::pair<std::size_t, std::size_t>;
    std::vector<Pair> pairs;

    // Gebauer-Moeller update when element t joins the working basis.
    const auto update_pairs = [&](std::size_t t) {
        std::vector<Pair> fresh;
        std::vector<Exponents> fresh_lcm;
        std::vector<Pair> kept;
        std::vector<Exponents> kept_lcm;
        for (std::size_t i = 0; i < t; ++i) {
            fresh.emplace_back(i, t);
            fresh_lcm.push_back(mono_lcm(lm(i), lm(t)));
        }
        for (std::size_t a = 0; a < fresh.size(); ++a) {
            bool keep = coprime(fresh[a].first, t);
            if (!keep) {
                keep = true;
                for (std::size_t b = 0; b < fresh.size() && keep; ++b) {
                    if (b == a) continue;
                    const bool b_alive = b > a ? true
                                               : std::find(kept.begin(), kept.end(), fresh[b]) != kept.end();
                    if (b_alive && mono_divides(fresh_lcm[b], fresh_lcm[a]) && fresh_lcm[b] != fresh_lcm[a])
                        keep = false;
                }
                if (keep) {
                    // among equal lcms keep the first survivor only
                    for (std::size_t b = 0; b < kept.size() && keep; ++b)
                        if (kept_lcm[b] == fresh_lcm[a]) keep = false;
                }
            } else {
                kept.push_back(fresh[a]);
                kept_lcm.push_back(fresh_lcm[a]);
                continue;
            }
            if (keep) {
                kept.push_back(fresh[a]);
                kept_lcm.push_back(fresh_lcm[a]);
            }
        }
        // chain criterion against the new leading monomial for old pairs
        std::vector<Pair> survivors;
        for (const Pair& p : pairs) {
            const Exponents l = mono_lcm(lm(p.first), lm(p.second));
            if (mono_divides(lm(t), l) && mono_lcm(lm(p.first), lm(t)) != l &&
                mono_lcm(lm(p.second), lm(t)) != l)
                continue;
            survivors.push_back(p);
        }
        pairs = std::move(survivors);
        for (std::size_t a = 0; a < kept.size(); ++a)
            if (!coprime(kept[a].first, t)) pairs.push_back(kept[a]);
    };

    for (std::size_t t = 0; t < g.size(); ++t) update_pairs(t);

    while (!pairs.empty()) {
        // normal strategy: smallest lcm in the term order, ties by index pair
        std::size_t best = 0;
        Exponents best_lcm = mono_lcm(lm(pairs[0].first), lm(pairs[0].second));
        for (std::size_t k = 1; k < pairs.size(); ++k) {
            Exponents l = mono_lcm(lm(pairs[k].first), lm(pairs[k].second));
            const int cmp = compare_monomials(l, best_lcm, *ctx);
            if (cmp < 0 || (cmp == 0 && pairs[k] < pairs[best])) {
                best = k;
                best_lcm = std::move(l);
            }
        }
        const auto [i, j] = pairs[best];
        pairs.erase(pairs.begin() + best);

        const Exponents l = mono_lcm(lm(i), lm(j));
        Element fi(ctx), fj(ctx);
        fi.add_term(mono_quotient(l, lm(i)), Rational(1) / g[i].poly.leading_coefficient());
        fj.add_term(mono_quotient(l, lm(j)), Rational(1) / g[j].poly.leading_coefficient());
        detail::TrackedPoly s;
        s.poly = fi * g[i].poly - fj * g[j].poly;
        s.rep.assign(gens.size(), Element(ctx));
        for (std::size_t c = 0; c < gens.size(); ++c)
            s.rep[c] = fi * g[i].rep[c] - fj * g[j].rep[c];

        std::vector<const Element*> items;
        items.reserve(g.size());
        for (const auto& tp : g) items.push_back(&tp.poly);
        auto [nf, cofs] = detail::normal_form(std::move(s.poly), items);
        if (nf.is_zero()) continue;
        for (std::size_t k = 0; k < g.size(); ++k)
            for (std::size_t c = 0; c < gens.size(); ++c)
                s.rep[c] -= cofs[k] * g[k].rep[c];
        const Rational inv = Rational(1) / nf.leading_coefficient();
        s.poly = inv * nf;
        for (std::size_t c = 0; c < gens.size(); ++c) s.rep[c] *= inv;
        g.push_back(std::move(s));
        update_pairs(g.size() - 1);
    }

    // minimal basis: drop entries whose leading monomial is divisible by
    // another survivor's leading monomial
    std::vector<std::size_t> order(g.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int cmp = compare_monomials(lm(a), lm(b), *ctx);
        return cmp != 0 ? cmp < 0 : a < b;
    });
    std::vector<std::size_t> minimal;
    for (const std::size_t k : order) {
        bool redundant = false;
        for (const std::size_t m : minimal)
            if (mono_divides(lm(m), lm(k))) {
                redundant = true;
                break;
            }
        if (!redundant) minimal.push_back(k);
    }

    // tail reduction to the unique reduced basis, representation maintained
    for (const std::size_t k : minimal) {
        std::vector<const Element*> others;
        for (const std::size_t m : minimal)
            if (m != k) others.push_back(&g[m].poly);
        auto [nf, cofs] = detail::normal_form(g[k].poly, others);
        std::size_t idx = 0;
        for (const std::size_t m : minimal) {
            if (m == k) continue;
            for (std::size_t c = 0; c < gens.size(); ++c) g[k].rep[c] -= cofs[idx] * g[m].rep[c];
            ++idx;
        }
        g[k].poly = std::move(nf);
        const Rational inv = Rational(1) / g[k].poly.leading_coefficient();
        g[k].poly = inv * g[k].poly;
        for (std::size_t c = 0; c < gens.size(); ++c) g[k].rep[c] *= inv;
    }

    for (const std::size_t k : minimal) {
        out.basis_.push_back(g[k].poly);
        out.reps_.push_back(g[k].rep);
    }
    return out;
}

// Normal form plus cofactors against the reduced basis.
inline DivisionResult divide_with_cofactors(const Element& p, const GroebnerBasis& gb) {
    if (!uses_only_even(p)) throw std::invalid_argument("odd variable present in dividend");
    std::vector<const Element*> items;
    items.reserve(gb.basis().size());
    for (const Element& b : gb.basis()) items.push_back(&b);
    auto [r, cofs] = detail::normal_form(p, items);
    return DivisionResult{std::move(r), std::move(cofs)};
}

// Rewrites division cofactors (against the reduced basis) as cofactors
// against the original generators: p - remainder = Σ out_j · gens_j.
inline std::vector<Element> express_in_generators(const DivisionResult& div, const GroebnerBasis& gb) {
    std::vector<Element> out(gb.generators().size(), Element(gb.context_ptr()));
    for (std::size_t i = 0; i < gb.basis().size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] += div.cofactors[i] * gb.representations()[i][j];
    return out;
}

inline bool ideal_contains(const Element& p, const GroebnerBasis& gb) {
    return divide_with_cofactors(p, gb).remainder.is_zero();
}

// Ideal quotient (gens) : (f) via the elimination trick: eliminate t from
// t·I + (1-t)·(f), then divide the t-free part by f.
inline GroebnerBasis ideal_quotient(const std::vector<Element>& gens, const Element& f,
                                    std::shared_ptr<const OrderContext> ctx = nullptr) {
    if (f.is_zero()) throw std::invalid_argument("ideal quotient by zero");
    if (!uses_only_even(f)) throw std::invalid_argument("odd variable present in quotient divisor");
    require_even_polynomials(gens);
    if (!ctx) ctx = f.context_ptr();

    const Signature& sig = ctx->sig;
    std::string tname = "_t";
    while (sig.has(tname)) tname += "t";
    std::vector<Generator> ext = sig.generators();
    ext.push_back(Generator{tname, 2});
    const std::size_t tslot = ext.size() - 1;
    Algebra extended(Signature(std::move(ext)), static_cast<int>(tslot));

    const auto lift = [&](const Element& p) {
        Element r = extended.zero();
        for (const auto& [m, c] : p.terms()) {
            Exponents e = m;
            e.push_back(0);
            r.add_term(e, c);
        }
        return r;
    };

    const Element t = extended.generator(tslot);
    const Element one_minus_t = extended.one() - t;
    std::vector<Element> work;
    for (const Element& gsrc : gens) {
        if (gsrc.is_zero()) continue;
        work.push_back(t * lift(gsrc));
    }
    work.push_back(one_minus_t * lift(f));

    const GroebnerBasis egb = groebner(work, extended.context_ptr());

    // t-free basis elements generate I ∩ (f); divide each by f exactly
    std::vector<Element> quotient_gens;
    GroebnerBasis f_only = groebner({f}, ctx);
    for (const Element& b : egb.basis()) {
        if (uses_slot(b, tslot)) continue;
        Element back(ctx);
        for (const auto& [m, c] : b.terms()) {
            Exponents e(m.begin(), m.end() - 1);
            back.add_term(e, c);
        }
        DivisionResult d = divide_with_cofactors(back, f_only);
        if (!d.remainder.is_zero())
            throw std::logic_error("intersection element not divisible by quotient divisor");
        quotient_gens.push_back(d.cofactors[0]);
    }
    return groebner(quotient_gens, ctx);
}

// Vector-space dimension of Q[even vars]/(gens); infinite unless every even
// variable carries a pure-power leading term.
struct QuotientDimension {
    bool finite = false;
    long long dimension = -1;
};

inline QuotientDimension quotient_dimension(const std::vector<Element>& gens,
                                            std::shared_ptr<const OrderContext> ctx = nullptr) {
    if (!ctx) {
        for (const Element& g : gens)
            if (g.valid()) {
                ctx = g.context_ptr();
                break;
            }
        if (!ctx) throw std::invalid_argument("quotient_dimension needs a context");
    }
    const GroebnerBasis gb = groebner(gens, ctx);

    std::vector<std::size_t> even_slots;
    for (std::size_t i = 0; i < ctx->sig.size(); ++i)
        if (!ctx->odd[i]) even_slots.push_back(i);

    std::vector<Exponents> lms;
    for (const Element& b : gb.basis()) lms.push_back(b.leading_monomial());

    if (gb.contains_one()) return QuotientDimension{true, 0};

    for (const std::size_t v : even_slots) {
        bool pure = false;
        for (const Exponents& m : lms) {
            bool only_v = m[v] > 0;
            for (std::size_t i = 0; i < m.size() && only_v; ++i)
                if (i != v && m[i] != 0) only_v = false;
            if (only_v) {
                pure = true;
                break;
            }
        }
        if (!pure) return QuotientDimension{false, -1};
    }

    const auto divisible = [&](const Exponents& e) {
        for (const Exponents& m : lms)
            if (mono_divides(m, e)) return true;
        return false;
    };

    Exponents cur(ctx->sig.size(), 0);
    long long total = 0;
    const auto count = [&](auto&& self, std::size_t pos) -> long long {
        if (divisible(cur)) return 0;
        if (pos == even_slots.size()) return 1;
        long long sub_total = 0;
        for (int e = 0;; ++e) {
            cur[even_slots[pos]] = e;
            const long long sub = self(self, pos + 1);
            if (sub == 0) break;
            sub_total += sub;
        }
        cur[even_slots[pos]] = 0;
        return sub_total;
    };
    total = count(count, 0);
    return QuotientDimension{true, total};
}

struct RegularityCertificate {
    bool regular = false;
    int witness_index = -1;  // 1-based position of the failing polynomial
    Element witness;
    bool witness_verified = false;
    bool dimension_cross_checked = false;
};

inline std::string render_report(const RegularityCertificate& cert) {
    std::ostringstream os;
    os << "verdict: " << (cert.regular ? "regular" : "not-regular") << "\n";
    if (!cert.regular) {
        os << "witness-index: " << cert.witness_index << "\n";
        os << "witness: " << to_string(cert.witness) << "\n";
    }
    return os.str();
}

namespace detail {

// Same ideal data under the order with generator significance reversed; used
// as an independent second route for membership checks.
struct ReversedWorld {
    Algebra alg;
    std::vector<Element> gens;
    Element map(const Element& p) const {
        Element r = alg.zero();
        for (const auto& [m, c] : p.terms()) r.add_term(Exponents(m.rbegin(), m.rend()), c);
        return r;
    }
};

inline ReversedWorld reversed_world(const std::vector<Element>& gens,
                                    const std::shared_ptr<const OrderContext>& ctx) {
    std::vector<Generator> rev(ctx->sig.generators().rbegin(), ctx->sig.generators().rend());
    ReversedWorld w{Algebra(Signature(std::move(rev))), {}};
    for (const Element& g : gens) w.gens.push_back(w.map(g));
    return w;
}

}  // namespace detail

// Double verification of a non-regularity witness Q at step i:
//  - Q·P_i lies in the prefix ideal: normal form zero, and the division
//    cofactors re-multiply to Q·P_i exactly (constructive membership), under
//    the primary order and again under the reversed-significance order;
//  - Q itself is outside the prefix ideal: nonzero normal form under both
//    orders.
inline bool verify_witness(const std::vector<Element>& prefix, const Element& p_i,
                           const Element& witness,
                           const std::shared_ptr<const OrderContext>& ctx) {
    const Element product = witness * p_i;

    const GroebnerBasis gb = groebner(prefix, ctx);
    DivisionResult d = divide_with_cofactors(product, gb);
    if (!d.remainder.is_zero()) return false;
    std::vector<Element> cof = express_in_generators(d, gb);
    Element rebuilt(ctx);
    for (std::size_t j = 0; j < prefix.size(); ++j) rebuilt += cof[j] * prefix[j];
    if (rebuilt != product) return false;
    if (ideal_contains(witness, gb)) return false;

    const detail::ReversedWorld w = detail::reversed_world(prefix, ctx);
    const GroebnerBasis rgb = groebner(w.gens, w.alg.context_ptr());
    if (!ideal_contains(w.map(product), rgb)) return false;
    if (ideal_contains(w.map(witness), rgb)) return false;
    return true;
}

// Iterated ideal-quotient regularity test, following the definition: P_i must
// not divide zero modulo (P_1..P_{i-1}), i.e. (P_1..P_{i-1}) : P_i equals the
// prefix ideal.  For a square homogeneous system the verdict is cross-checked
// against finite-dimensionality of the full quotient.
inline RegularityCertificate is_regular_sequence(const std::vector<Element>& P) {
    if (P.empty()) throw std::invalid_argument("empty sequence");
    require_even_polynomials(P);
    std::shared_ptr<const OrderContext> ctx;
    for (const Element& p : P)
        if (p.valid()) {
            ctx = p.context_ptr();
            break;
        }
    if (!ctx) throw std::invalid_argument("sequence has no valid element");

    RegularityCertificate cert;
    std::vector<Element> prefix;
    GroebnerBasis prefix_gb = groebner({}, ctx);

    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i].is_zero()) {
            Element one(ctx);
            one.add_term(Exponents(ctx->sig.size(), 0), 1);
            if (!ideal_contains(one, prefix_gb)) {
                cert.regular = false;
                cert.witness_index = static_cast<int>(i) + 1;
                cert.witness = one;
                cert.witness_verified = verify_witness(prefix, P[i], one, ctx);
                return cert;
            }
            continue;
        }
        const GroebnerBasis quot = ideal_quotient(prefix, P[i], ctx);
        if (!quot.same_ideal_basis(prefix_gb)) {
            Element witness(ctx);
            for (const Element& q : quot.basis())
                if (!ideal_contains(q, prefix_gb)) {
                    witness = q;
                    break;
                }
            if (witness.is_zero()) throw std::logic_error("strictly larger quotient without witness");
            cert.regular = false;
            cert.witness_index = static_cast<int>(i) + 1;
            cert.witness = witness;
            cert.witness_verified = verify_witness(prefix, P[i], witness, ctx);
            return cert;
        }
        prefix.push_back(P[i]);
        prefix_gb = groebner(prefix, ctx);
    }
    cert.regular = true;

    std::size_t even_vars = 0;
    for (std::size_t i = 0; i < ctx->sig.size(); ++i)
        if (!ctx->odd[i]) ++even_vars;
    bool homogeneous_positive = true;
    for (const Element& p : P) {
        const auto d = p.cohomological_degree();
        if (!d || *d < 1) homogeneous_positive = false;
    }
    if (P.size() == even_vars && homogeneous_positive) {
        const QuotientDimension qd = quotient_dimension(P, ctx);
        if (!qd.finite)
            throw std::logic_error("regular verdict contradicts infinite-dimensional quotient");
        cert.dimension_cross_checked = true;
    }
    return cert;
}

}  // namespace cdga
