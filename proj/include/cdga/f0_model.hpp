#pragma once

#include "cdga/dga.hpp"
#include "cdga/ideal.hpp"
#include "cdga/parse.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdga {

// Sullivan model with vanishing odd cohomology: even closed generators
// x_1..x_n followed by odd generators y_1..y_n with d(y_i) = P_i for a
// regular sequence P_1..P_n in Q[x_1..x_n].  Normal form: the x_i appear in
// weakly increasing degree and |P_1| <= ... <= |P_n|, ties broken by the
// original index.
struct F0Model {
    CochainAlgebra algebra;  // generators x_1..x_n then y_1..y_n
    Algebra even_part;       // the polynomial subalgebra Q[x_1..x_n]
    std::vector<Element> P;  // elements of even_part; d(y_i) = P_i
    RegularityCertificate regularity;

    int rank() const { return static_cast<int>(P.size()); }
};

// Rejection of a differential list that is not a regular sequence; carries
// the certificate so callers can report the witness.
struct NotRegularError : std::invalid_argument {
    RegularityCertificate certificate;

    NotRegularError(const std::string& what, RegularityCertificate cert)
        : std::invalid_argument(what), certificate(std::move(cert)) {}
};

// Embed an element of Q[x_1..x_n] into the full model algebra; the even
// generators occupy the leading slots of the model signature.
inline Element lift_even(const Element& p, const Algebra& full) {
    Element r = full.zero();
    for (const auto& [m, c] : p.terms()) {
        Exponents e(full.size(), 0);
        std::copy(m.begin(), m.end(), e.begin());
        r.add_term(e, c);
    }
    return r;
}

// Project an element of the model algebra onto Q[x_1..x_n]; rejects elements
// that involve an odd generator.
inline Element restrict_even(const Element& p, const Algebra& even) {
    const std::size_t k = even.size();
    Element r = even.zero();
    for (const auto& [m, c] : p.terms()) {
        for (std::size_t j = k; j < m.size(); ++j)
            if (m[j] != 0)
                throw std::invalid_argument("element does not lie in the even subalgebra");
        r.add_term(Exponents(m.begin(), m.begin() + k), c);
    }
    return r;
}

namespace detail {

// Shared constructor core: sorts the generator data into normal form, checks
// regularity, and assembles the validated cochain algebra.  `P[i]` must live
// in an even algebra whose slot order matches `x_gens`.
inline F0Model assemble_f0(std::vector<std::pair<std::string, int>> x_gens,
                           std::vector<std::pair<std::string, Element>> named_P) {
    const std::size_t n = x_gens.size();
    if (n == 0) throw std::invalid_argument("an F0 model needs at least one generator pair");
    if (named_P.size() != n)
        throw std::invalid_argument("an F0 model needs equal numbers of even and odd generators");
    for (const auto& [name, degree] : x_gens)
        if (degree <= 0 || degree % 2 != 0)
            throw std::invalid_argument("even generator " + name +
                                        " must have positive even degree");
    std::vector<int> p_degrees(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Element& p = named_P[i].second;
        if (p.is_zero())
            throw std::invalid_argument("d(" + named_P[i].first + ") must be nonzero");
        const auto deg = p.cohomological_degree();
        if (!deg)
            throw std::invalid_argument("d(" + named_P[i].first + ") must be homogeneous");
        p_degrees[i] = *deg;
    }

    // Stable re-indexing of the even generators by degree.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return x_gens[a].second < x_gens[b].second;
    });
    std::vector<std::pair<std::string, int>> sig_pairs;
    for (std::size_t k = 0; k < n; ++k) sig_pairs.push_back(x_gens[perm[k]]);
    Algebra even(make_signature(sig_pairs));
    std::vector<std::pair<std::string, Element>> sorted_P;
    for (auto& [name, p] : named_P) {
        Element q = even.zero();
        for (const auto& [m, c] : p.terms()) {
            Exponents e(n, 0);
            for (std::size_t k = 0; k < n; ++k) e[k] = m[perm[k]];
            q.add_term(e, c);
        }
        sorted_P.emplace_back(name, std::move(q));
    }

    // Stable re-indexing of the differentials by degree.
    std::vector<std::size_t> perm_p(n);
    std::iota(perm_p.begin(), perm_p.end(), 0);
    std::stable_sort(perm_p.begin(), perm_p.end(), [&](std::size_t a, std::size_t b) {
        return p_degrees[a] < p_degrees[b];
    });

    std::vector<Element> P;
    for (std::size_t k = 0; k < n; ++k) {
        P.push_back(sorted_P[perm_p[k]].second);
        sig_pairs.emplace_back(sorted_P[perm_p[k]].first, p_degrees[perm_p[k]] - 1);
    }

    RegularityCertificate cert = is_regular_sequence(P);
    if (!cert.regular)
        throw NotRegularError("the differentials do not form a regular sequence\n" +
                                  render_report(cert),
                              cert);

    Algebra full(make_signature(sig_pairs));
    std::vector<Element> diff(n, full.zero());
    for (const Element& p : P) diff.push_back(lift_even(p, full));
    CochainAlgebra algebra = make_cochain_algebra(full, std::move(diff));
    return F0Model{std::move(algebra), std::move(even), std::move(P), std::move(cert)};
}

}  // namespace detail

// Build a model from even generator degrees and differential polynomials
// written in the generators x1..xn.
inline F0Model build_f0(const std::vector<int>& x_degrees,
                        const std::vector<std::string>& P_texts) {
    if (x_degrees.empty()) throw std::invalid_argument("an F0 model needs at least one generator pair");
    std::vector<std::pair<std::string, int>> x_gens;
    for (std::size_t i = 0; i < x_degrees.size(); ++i)
        x_gens.emplace_back("x" + std::to_string(i + 1), x_degrees[i]);
    for (const auto& [name, degree] : x_gens)
        if (degree <= 0 || degree % 2 != 0)
            throw std::invalid_argument("even generator " + name +
                                        " must have positive even degree");
    Algebra even(make_signature(x_gens));
    std::vector<std::pair<std::string, Element>> named_P;
    for (std::size_t i = 0; i < P_texts.size(); ++i)
        named_P.emplace_back("y" + std::to_string(i + 1), parse_element(P_texts[i], even));
    return detail::assemble_f0(std::move(x_gens), std::move(named_P));
}

// Re-sort an existing model into normal form (stable in the original index).
inline F0Model normalize(const F0Model& model) {
    const Signature& sig = model.even_part.signature();
    std::vector<std::pair<std::string, int>> x_gens;
    for (std::size_t i = 0; i < sig.size(); ++i) x_gens.emplace_back(sig[i].name, sig[i].degree);
    std::vector<std::pair<std::string, Element>> named_P;
    const Signature& full = model.algebra.signature();
    for (std::size_t i = 0; i < model.P.size(); ++i)
        named_P.emplace_back(full[sig.size() + i].name, model.P[i]);
    return detail::assemble_f0(std::move(x_gens), std::move(named_P));
}

// Interpret a validated cochain algebra as an F0 model: equal numbers of even
// and odd generators, all even generators closed, every odd differential a
// polynomial in the even generators.  Generator names are preserved but
// re-indexed into normal form.
inline F0Model classify_f0(const CochainAlgebra& a) {
    const Signature& sig = a.signature();
    std::vector<std::pair<std::string, int>> x_gens;
    std::vector<std::size_t> even_slots, odd_slots;
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (sig[i].is_even()) {
            even_slots.push_back(i);
            x_gens.emplace_back(sig[i].name, sig[i].degree);
        } else {
            odd_slots.push_back(i);
        }
    }
    if (even_slots.size() != odd_slots.size() || even_slots.empty())
        throw std::invalid_argument("an F0 model needs equal numbers of even and odd generators");
    for (std::size_t i : even_slots)
        if (!a.diff[i].is_zero())
            throw std::invalid_argument("even generator " + sig[i].name + " is not closed");

    Algebra even(make_signature(x_gens));
    std::vector<std::pair<std::string, Element>> named_P;
    for (std::size_t i : odd_slots) {
        Element p = even.zero();
        for (const auto& [m, c] : a.diff[i].terms()) {
            Exponents e(even_slots.size(), 0);
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (m[j] == 0) continue;
                const auto it = std::find(even_slots.begin(), even_slots.end(), j);
                if (it == even_slots.end())
                    throw std::invalid_argument("d(" + sig[i].name +
                                                ") must be a polynomial in the even generators");
                e[it - even_slots.begin()] = m[j];
            }
            p.add_term(e, c);
        }
        named_P.emplace_back(sig[i].name, std::move(p));
    }
    return detail::assemble_f0(std::move(x_gens), std::move(named_P));
}

// Coefficients 0..d_max of prod(1 - t^{b_i}) / prod(1 - t^{a_i}), the
// Hilbert series of Q[x]/(P) for a regular sequence with |x_i| = a_i and
// |P_i| = b_i.
inline std::vector<long long> hilbert_coefficients(const std::vector<int>& x_degrees,
                                                   const std::vector<int>& p_degrees, int d_max) {
    if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
    std::vector<long long> c(static_cast<std::size_t>(d_max) + 1, 0);
    c[0] = 1;
    for (int a : x_degrees)  // multiply by 1/(1 - t^a)
        for (int k = a; k <= d_max; ++k) c[k] += c[k - a];
    for (int b : p_degrees)  // multiply by (1 - t^b)
        for (int k = d_max; k >= b; --k) c[k] -= c[k - b];
    return c;
}

// Number of degree-d monomials in the even algebra outside the leading-term
// ideal of the Groebner basis.
inline long long standard_monomial_count(const GroebnerBasis& gb, const Algebra& even, int degree,
                                         std::size_t cap = 20000) {
    long long count = 0;
    for (const Exponents& m : even.monomial_basis(degree, cap)) {
        bool divisible = false;
        for (const Element& g : gb.basis())
            if (mono_divides(g.leading_monomial(), m)) {
                divisible = true;
                break;
            }
        if (!divisible) ++count;
    }
    return count;
}

struct F0CohomologyReport {
    bool ok = true;
    int first_failing_degree = -1;  // -1 when every degree agrees
    std::string detail;             // description of the first mismatch
    std::vector<int> dimensions;    // dim H^d for d = 0..last degree checked
    bool total_checked = false;     // sum of dims compared with the quotient dimension
};

// Check dim H^d for d = 0..d_max three ways: odd degrees must vanish, and in
// even degrees the rank computation, the standard-monomial count, and the
// Hilbert-series coefficient must agree.  When d_max reaches the top degree
// bound sum(|P_i| - |x_i|), the total is also compared with the quotient
// dimension.
inline F0CohomologyReport verify_f0_cohomology(const F0Model& model, int d_max,
                                               std::size_t cap = 20000) {
    if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
    const Signature& sig = model.even_part.signature();
    std::vector<int> x_degrees, p_degrees;
    for (std::size_t i = 0; i < sig.size(); ++i) x_degrees.push_back(sig[i].degree);
    int top_bound = 0;
    for (std::size_t i = 0; i < model.P.size(); ++i) {
        const int pd = *model.P[i].cohomological_degree();
        p_degrees.push_back(pd);
        top_bound += pd - x_degrees[i];
    }
    const std::vector<long long> series = hilbert_coefficients(x_degrees, p_degrees, d_max);
    const GroebnerBasis gb = groebner(model.P);

    F0CohomologyReport report;
    for (int d = 0; d <= d_max; ++d) {
        const int dim = cohomology_dimension(model.algebra, d, cap);
        report.dimensions.push_back(dim);
        if (d % 2 != 0) {
            if (dim != 0) {
                report.ok = false;
                report.first_failing_degree = d;
                report.detail = "H^" + std::to_string(d) + " has dimension " +
                                std::to_string(dim) + ", expected 0";
                return report;
            }
            continue;
        }
        const long long quotient = standard_monomial_count(gb, model.even_part, d, cap);
        if (dim != quotient || quotient != series[d]) {
            report.ok = false;
            report.first_failing_degree = d;
            report.detail = "H^" + std::to_string(d) + " has dimension " + std::to_string(dim) +
                            ", quotient ring has " + std::to_string(quotient) +
                            ", series coefficient is " + std::to_string(series[d]);
            return report;
        }
    }
    if (d_max >= top_bound) {
        long long total = 0;
        for (int dim : report.dimensions) total += dim;
        const QuotientDimension qd = quotient_dimension(model.P);
        if (!qd.finite || qd.dimension != total) {
            report.ok = false;
            report.detail = "total cohomology dimension " + std::to_string(total) +
                            " differs from the quotient dimension " +
                            (qd.finite ? std::to_string(qd.dimension) : std::string("infinite"));
            return report;
        }
        report.total_checked = true;
    }
    return report;
}

}  // namespace cdga
