#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cdga/element.hpp"
#include "cdga/ideal.hpp"
#include "cdga/linalg.hpp"

namespace cdga {

// Splitting an even polynomial P along a designated linear form.
//
// Throughout, the first three even generators play fixed roles and are
// written x1, x2, x3 below: x1 is the divisibility pivot, x3 the variable
// eliminated by the split, and x2 the variable x3 is rooted onto.  A
// *form* A is a polynomial in x1, x2, x3 alone; a *decomposition* of P
// along A is
//
//     P = A * B + x1^e * Q,        Q free of x3,
//
// with e as large as possible, Q != 0 and Q not divisible by x1 (both are
// automatic at the maximal e).  Exact multiples P = A * B are recorded
// separately.  P need not be homogeneous: the solve splits into one exact
// linear system per homogeneous component, all sharing the single
// exponent e.

struct Decomposition {
    Element P;     // the decomposed polynomial
    Element form;  // the designated form A
    Element B;     // cofactor
    Element Q;     // residual, free of the third variable
    int e = 0;     // x1-exponent of the residual part
    bool exact_multiple = false;  // P = A * B exactly (Q = 0, e meaningless)
};

namespace detail {

// Is every term of p divisible by the generator at `slot`?  Zero counts as
// divisible.
inline bool divisible_by_variable(const Element& p, std::size_t slot) {
    for (const auto& [m, c] : p.terms())
        if (m[slot] == 0) return false;
    return true;
}

inline void enumerate_even(const OrderContext& ctx, std::size_t slot, int remaining, int skip_slot,
                           Exponents& cur, std::vector<Exponents>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    if (slot >= ctx.sig.size()) return;
    if (ctx.odd[slot] || static_cast<int>(slot) == skip_slot) {
        enumerate_even(ctx, slot + 1, remaining, skip_slot, cur, out);
        return;
    }
    const int d = ctx.weights[slot];
    for (int e = 0; e * d <= remaining; ++e) {
        cur[slot] = e;
        enumerate_even(ctx, slot + 1, remaining - e * d, skip_slot, cur, out);
    }
    cur[slot] = 0;
}

// All monomials of the given weighted degree over the even generators,
// optionally excluding one slot.
inline std::vector<Exponents> even_monomials(const OrderContext& ctx, int degree, int skip_slot) {
    std::vector<Exponents> out;
    if (degree < 0) return out;
    Exponents cur(ctx.sig.size(), 0);
    enumerate_even(ctx, 0, degree, skip_slot, cur, out);
    return out;
}

struct LinearSplit {
    Element B;
    Element Q;
};

// Solve P = A * B + x1^e * Q exactly, with Q free of slot 2, at the fixed
// exponent e.  When with_residual is false the residual columns are
// omitted and the solve asks for an exact multiple P = A * B.  Unknowns
// are restricted to the homogeneous degrees present in P; components a
// solution might carry at other degrees cancel pairwise and can always be
// dropped, so the restriction loses no solutions.
inline std::optional<LinearSplit> solve_split(const Element& P, const Element& A, int e,
                                              bool with_residual) {
    const auto ctx = P.context_ptr();
    Element B(ctx), Q(ctx);
    if (P.is_zero()) return LinearSplit{B, Q};

    const long long deg_form = *A.cohomological_degree();
    const long long w1 = P.context().weights[0];

    std::set<long long> degrees;
    for (const auto& [m, c] : P.terms()) degrees.insert(weighted_degree(m, P.context()));

    std::vector<Element> columns;
    std::vector<Exponents> column_monomial;
    std::vector<char> column_is_residual;
    for (long long d : degrees) {
        const long long db = d - deg_form;
        if (db < 0) continue;
        for (const Exponents& m : even_monomials(P.context(), static_cast<int>(db), -1)) {
            Element mono(ctx);
            mono.add_term(m, 1);
            columns.push_back(A * mono);
            column_monomial.push_back(m);
            column_is_residual.push_back(0);
        }
    }
    if (with_residual) {
        Exponents shift(P.context().sig.size(), 0);
        shift[0] = e;
        Element x1e(ctx);
        x1e.add_term(shift, 1);
        for (long long d : degrees) {
            const long long dq = d - static_cast<long long>(e) * w1;
            if (dq < 0) continue;
            for (const Exponents& m : even_monomials(P.context(), static_cast<int>(dq), 2)) {
                Element mono(ctx);
                mono.add_term(m, 1);
                columns.push_back(x1e * mono);
                column_monomial.push_back(m);
                column_is_residual.push_back(1);
            }
        }
    }
    if (columns.empty()) return std::nullopt;

    std::map<Exponents, std::size_t> row_of;
    for (const auto& [m, c] : P.terms()) row_of.emplace(m, 0);
    for (const Element& col : columns)
        for (const auto& [m, c] : col.terms()) row_of.emplace(m, 0);
    std::size_t next_row = 0;
    for (auto& [m, r] : row_of) r = next_row++;

    Matrix a(next_row, Row(columns.size(), Rational(0)));
    Row b(next_row, Rational(0));
    for (const auto& [m, c] : P.terms()) b[row_of[m]] = c;
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& [m, c] : columns[j].terms()) a[row_of[m]][j] = c;

    const auto sol = solve_linear(a, b);
    if (!sol) return std::nullopt;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if ((*sol)[j] == 0) continue;
        (column_is_residual[j] ? Q : B).add_term(column_monomial[j], (*sol)[j]);
    }
    return LinearSplit{B, Q};
}

// The root x3 -> -tail / (c * x1^a) of a form A = c * x1^a * x3 + tail,
// when the division by x1^a stays polynomial.
inline std::optional<Element> form_root(const Element& A) {
    const Element lead = A.coeff_wrt(2, 1);
    const Exponents& lm = lead.terms().begin()->first;
    const Rational c = lead.terms().begin()->second;
    const int a = lm[0];
    const Element tail = A.coeff_wrt(2, 0);
    Element root(A.context_ptr());
    for (const auto& [m, coef] : tail.terms()) {
        if (m[0] < a) return std::nullopt;
        Exponents r = m;
        r[0] -= a;
        root.add_term(r, -coef / c);
    }
    return root;
}

inline void require_even_element(const Element& p, const char* what) {
    if (!p.valid()) throw std::invalid_argument(std::string(what) + " is not attached to an algebra");
    if (!uses_only_even(p)) throw std::invalid_argument(std::string(what) + " involves an odd generator");
}

inline void require_role_slots(const OrderContext& ctx) {
    if (ctx.sig.size() < 3 || ctx.odd[0] || ctx.odd[1] || ctx.odd[2])
        throw std::invalid_argument("the first three generators must be even");
}

inline void require_form_shape(const Element& A) {
    if (A.is_zero()) throw std::invalid_argument("the form is zero");
    if (!A.is_homogeneous()) throw std::invalid_argument("the form must be homogeneous");
    for (const auto& [m, c] : A.terms())
        for (std::size_t i = 3; i < m.size(); ++i)
            if (m[i] != 0)
                throw std::invalid_argument("the form may involve only the first three generators");
    if (A.deg_in(2) != 1)
        throw std::invalid_argument("the form must have degree one in the third generator");
    const Element lead = A.coeff_wrt(2, 1);
    bool single_power_of_x1 = lead.term_count() == 1;
    if (single_power_of_x1) {
        const Exponents& m = lead.terms().begin()->first;
        for (std::size_t i = 1; i < m.size(); ++i)
            if (m[i] != 0) single_power_of_x1 = false;
    }
    if (!single_power_of_x1)
        throw std::invalid_argument(
            "the coefficient of the third generator must be a rational multiple of a power of "
            "the first");
}

}  // namespace detail

// Decompose P along the form A, maximizing the x1-exponent of the
// residual part.  A must have degree exactly one in x3 with coefficient a
// nonzero rational multiple of a power of x1, and constant x3-part in
// Q[x1, x2].  Throws std::invalid_argument on shape violations and when no
// decomposition exists.
inline Decomposition decompose_by_form(const Element& P, const Element& A) {
    detail::require_even_element(P, "polynomial");
    detail::require_even_element(A, "form");
    if (P.context_ptr() != A.context_ptr())
        throw std::invalid_argument("polynomial and form live in different algebras");
    detail::require_role_slots(P.context());
    if (P.is_zero()) throw std::invalid_argument("cannot decompose the zero polynomial");
    detail::require_form_shape(A);

    Decomposition result;
    result.P = P;
    result.form = A;

    if (auto exact = detail::solve_split(P, A, 0, false)) {
        result.B = exact->B;
        result.Q = Element(P.context_ptr());
        result.e = 0;
        result.exact_multiple = true;
        return result;
    }

    long long top = 0;
    for (const auto& [m, c] : P.terms())
        top = std::max(top, weighted_degree(m, P.context()) / P.context().weights[0]);
    for (int e = static_cast<int>(top); e >= 0; --e) {
        auto split = detail::solve_split(P, A, e, true);
        if (!split) continue;
        result.B = split->B;
        result.Q = split->Q;
        result.e = e;
        result.exact_multiple = false;
        // Soundness: re-verify by ring arithmetic, then check the residual
        // invariants that the maximal exponent guarantees.
        Exponents shift(P.context().sig.size(), 0);
        shift[0] = e;
        Element x1e(P.context_ptr());
        x1e.add_term(shift, 1);
        if (A * result.B + x1e * result.Q != P)
            throw std::logic_error("decomposition failed re-verification");
        if (result.Q.is_zero())
            throw std::logic_error("exact multiple missed by the dedicated solve");
        if (detail::divisible_by_variable(result.Q, 0))
            throw std::logic_error("residual divisible by the pivot at the maximal exponent");
        // Independent cross-check when the form has a polynomial root:
        // substituting the root kills A, leaving exactly the residual part.
        if (auto root = detail::form_root(A)) {
            if (!A.substitute(2, *root).is_zero())
                throw std::logic_error("form root fails to annihilate the form");
            if (P.substitute(2, *root) != x1e * result.Q)
                throw std::logic_error("root substitution disagrees with the residual");
        }
        return result;
    }
    throw std::invalid_argument("no decomposition along the given form exists");
}

// Reduction route for wide algebras: expand P in the highest even variable
// beyond the fourth, decompose each coefficient recursively, and reassemble
// around the smallest residual exponent e:
//
//     B = Σ_j B_j xₙ^j,   Q = Σ_j x1^(e_j − e) Q_j xₙ^j,   e = min_j e_j,
//
// with exact-multiple slices contributing to B only.  If every slice is an
// exact multiple, so is P.  The result always agrees with decompose_by_form:
// a split of P at a higher exponent would restrict to every slice and
// contradict the per-slice maximality of e_j.
inline Decomposition decompose_by_form_recursive(const Element& P, const Element& A) {
    detail::require_even_element(P, "polynomial");
    detail::require_even_element(A, "form");
    if (P.context_ptr() != A.context_ptr())
        throw std::invalid_argument("polynomial and form live in different algebras");
    detail::require_role_slots(P.context());
    if (P.is_zero()) throw std::invalid_argument("cannot decompose the zero polynomial");
    detail::require_form_shape(A);

    const OrderContext& ctx = P.context();
    std::size_t peel = 0;
    bool peel_found = false;
    std::size_t even_rank = 0;
    for (std::size_t i = 0; i < ctx.sig.size(); ++i) {
        if (ctx.odd[i]) continue;
        ++even_rank;
        if (even_rank <= 4) continue;
        if (P.deg_in(i) > 0) {
            peel = i;
            peel_found = true;
        }
    }
    if (!peel_found) return decompose_by_form(P, A);

    const int m = P.deg_in(peel);
    std::vector<std::optional<Decomposition>> slices(static_cast<std::size_t>(m) + 1);
    bool all_exact = true;
    int e = 0;
    bool e_set = false;
    for (int j = 0; j <= m; ++j) {
        const Element pj = P.coeff_wrt(peel, j);
        if (pj.is_zero()) continue;
        slices[static_cast<std::size_t>(j)] = decompose_by_form_recursive(pj, A);
        const Decomposition& d = *slices[static_cast<std::size_t>(j)];
        if (!d.exact_multiple) {
            all_exact = false;
            if (!e_set || d.e < e) e = d.e;
            e_set = true;
        }
    }

    Decomposition result;
    result.P = P;
    result.form = A;
    Element B(P.context_ptr());
    Element Q(P.context_ptr());
    for (int j = 0; j <= m; ++j) {
        const auto& slice = slices[static_cast<std::size_t>(j)];
        if (!slice) continue;
        Exponents xm(ctx.sig.size(), 0);
        xm[peel] = j;
        Element xj(P.context_ptr());
        xj.add_term(xm, 1);
        B += slice->B * xj;
        if (!slice->exact_multiple) {
            Exponents sh(ctx.sig.size(), 0);
            sh[0] = slice->e - e;
            Element lift(P.context_ptr());
            lift.add_term(sh, 1);
            Q += lift * (slice->Q * xj);
        }
    }
    result.B = B;
    result.Q = Q;
    if (all_exact) {
        result.e = 0;
        result.exact_multiple = true;
        if (A * result.B != P) throw std::logic_error("exact reassembly failed re-verification");
        return result;
    }
    result.e = e;
    result.exact_multiple = false;
    Exponents shift(ctx.sig.size(), 0);
    shift[0] = e;
    Element x1e(P.context_ptr());
    x1e.add_term(shift, 1);
    if (A * result.B + x1e * result.Q != P)
        throw std::logic_error("reassembly failed re-verification");
    if (result.Q.is_zero() || result.Q.deg_in(2) != 0 ||
        detail::divisible_by_variable(result.Q, 0))
        throw std::logic_error("reassembled residual violates the split invariants");
    return result;
}

// Certification that a triple fails to be regular because each member
// splits along one common form.
//
// The caller supplies the triple, the form A, the root parameter chi, and
// one x1-exponent per slot.  The checker verifies the four hypotheses of
// the non-regularity criterion:
//   (1) each P_i decomposes as A * B_i + x1^(a_i) * Q_i at the supplied
//       exponent, with Q_i free of x3;
//   (2) the distinguished residual is nonzero and not divisible by x1;
//   (3) (|x3| - |x2|) / |x1| is a nonnegative integer (the degree step);
//   (4) A lies in Q[x1, x2][x3] and chi * x1^step * x2 is a root of A.
// Slots are stably sorted by supplied exponent and the sorted-first slot
// is distinguished, exactly as supplied: a residual divisible by x1 in
// that slot is a hypothesis (2) failure even when a different exponent
// would repair it.  The distinguished exponent must also be positive.
// When every hypothesis holds, the regularity engine must return
// not-regular; the certificate carries its double-verified witness.
struct TripleSlot {
    int input_index = 0;  // 1-based position in the supplied triple
    int exponent = 0;
    bool solved = false;
    Element P;
    Element B;
    Element Q;
};

struct TripleCertificate {
    bool decompositions_exist = false;   // hypothesis 1
    bool residuals_shaped = false;       // hypothesis 2
    bool degree_step_integral = false;   // hypothesis 3
    bool root_annihilates = false;       // hypothesis 4
    bool exponent_positive = false;      // distinguished exponent >= 1
    bool hypotheses_pass = false;
    bool regularity_checked = false;
    RegularityCertificate regularity;
    bool certified = false;
    std::vector<TripleSlot> slots;  // in sorted order
    std::vector<std::string> lines;
};

inline std::string render_report(const TripleCertificate& cert) {
    std::string out;
    for (const std::string& line : cert.lines) {
        out += line;
        out += '\n';
    }
    return out;
}

inline TripleCertificate certify_nonregular_triple(const Element& P1, const Element& P2,
                                                   const Element& P3, const Element& A,
                                                   const Rational& chi,
                                                   const std::vector<int>& exponents) {
    detail::require_even_element(P1, "first polynomial");
    detail::require_even_element(P2, "second polynomial");
    detail::require_even_element(P3, "third polynomial");
    detail::require_even_element(A, "form");
    if (P1.context_ptr() != P2.context_ptr() || P1.context_ptr() != P3.context_ptr() ||
        P1.context_ptr() != A.context_ptr())
        throw std::invalid_argument("triple and form must live in one algebra");
    if (exponents.size() != 3) throw std::invalid_argument("exactly three exponents required");
    for (int a : exponents)
        if (a < 0) throw std::invalid_argument("negative exponent");
    if (A.is_zero()) throw std::invalid_argument("the form is zero");
    if (!A.is_homogeneous()) throw std::invalid_argument("the form must be homogeneous");
    const OrderContext& ctx = P1.context();
    detail::require_role_slots(ctx);
    std::size_t even_count = 0;
    for (std::size_t i = 0; i < ctx.sig.size(); ++i)
        if (!ctx.odd[i]) ++even_count;
    if (even_count < 4) throw std::invalid_argument("at least four even generators required");

    TripleCertificate cert;
    const Signature& sig = ctx.sig;
    const std::string n1 = sig[0].name, n2 = sig[1].name, n3 = sig[2].name;
    auto line = [&cert](const std::string& s) { cert.lines.push_back(s); };

    line("form: " + to_string(A));
    line("chi: " + format_rational(chi));

    // Hypothesis 3: the degree step.
    const long long w1 = ctx.weights[0], w2 = ctx.weights[1], w3 = ctx.weights[2];
    long long step = 0;
    cert.degree_step_integral = (w3 - w2) >= 0 && (w3 - w2) % w1 == 0;
    if (cert.degree_step_integral) {
        step = (w3 - w2) / w1;
        line("degree step: " + std::to_string(step));
    } else {
        line("degree step: undefined");
    }

    // Hypothesis 4: the designated root.
    bool form_in_role_slots = true;
    for (const auto& [m, c] : A.terms())
        for (std::size_t i = 3; i < m.size(); ++i)
            if (m[i] != 0) form_in_role_slots = false;
    cert.root_annihilates = false;
    std::string root_text = "undefined";
    if (form_in_role_slots && cert.degree_step_integral) {
        Exponents rm(sig.size(), 0);
        rm[0] = static_cast<int>(step);
        rm[1] = 1;
        Element root(P1.context_ptr());
        root.add_term(rm, chi);
        root_text = to_string(root);
        cert.root_annihilates = A.substitute(2, root).is_zero();
    }
    line("designated root: " + n3 + " -> " + root_text);

    // Hypothesis 1: decompose every slot at its supplied exponent, then
    // sort stably by exponent.
    const Element* inputs[3] = {&P1, &P2, &P3};
    for (int i = 0; i < 3; ++i) {
        TripleSlot slot;
        slot.input_index = i + 1;
        slot.exponent = exponents[static_cast<std::size_t>(i)];
        slot.P = *inputs[i];
        if (auto split = detail::solve_split(*inputs[i], A, slot.exponent, true)) {
            slot.solved = true;
            slot.B = split->B;
            slot.Q = split->Q;
        }
        cert.slots.push_back(std::move(slot));
    }
    std::stable_sort(cert.slots.begin(), cert.slots.end(),
                     [](const TripleSlot& a, const TripleSlot& b) { return a.exponent < b.exponent; });
    {
        std::string order = "slot order by exponent:";
        for (const TripleSlot& s : cert.slots) order += " P" + std::to_string(s.input_index);
        line(order);
    }
    cert.decompositions_exist = true;
    for (const TripleSlot& s : cert.slots) {
        if (s.solved) {
            line("P" + std::to_string(s.input_index) + ": exponent " + std::to_string(s.exponent) +
                 ", cofactor " + to_string(s.B) + ", residual " + to_string(s.Q));
        } else {
            cert.decompositions_exist = false;
            line("P" + std::to_string(s.input_index) + ": no decomposition at exponent " +
                 std::to_string(s.exponent));
        }
    }

    // Hypothesis 2 and exponent positivity, on the distinguished slot.
    const TripleSlot& first = cert.slots.front();
    cert.residuals_shaped =
        first.solved && !first.Q.is_zero() && !detail::divisible_by_variable(first.Q, 0);
    cert.exponent_positive = first.exponent >= 1;

    auto verdict = [](bool ok) { return ok ? std::string("pass") : std::string("fail"); };
    line("hypothesis 1 (cofactor decompositions exist at the supplied exponents): " +
         verdict(cert.decompositions_exist));
    line("hypothesis 2 (residuals avoid " + n3 + "; distinguished residual nonzero, not divisible by " +
         n1 + "): " + verdict(cert.residuals_shaped));
    line("hypothesis 3 (degree step (|" + n3 + "| - |" + n2 + "|) / |" + n1 +
         "| is a nonnegative integer): " + verdict(cert.degree_step_integral));
    line("hypothesis 4 (designated root annihilates the form): " + verdict(cert.root_annihilates));
    line("distinguished exponent positive: " + verdict(cert.exponent_positive));

    cert.hypotheses_pass = cert.decompositions_exist && cert.residuals_shaped &&
                           cert.degree_step_integral && cert.root_annihilates &&
                           cert.exponent_positive;
    if (!cert.hypotheses_pass) {
        line("hypotheses not satisfied; regularity not asserted");
        line("certified: no");
        return cert;
    }

    cert.regularity = is_regular_sequence({P1, P2, P3});
    cert.regularity_checked = true;
    if (cert.regularity.regular) {
        line("verdict: regular");
        line("contradiction: hypotheses hold yet the sequence is regular");
        line("certified: no");
        return cert;
    }
    line("verdict: not-regular");
    line("witness-index: " + std::to_string(cert.regularity.witness_index));
    line("witness: " + to_string(cert.regularity.witness));
    line(std::string("witness-verified: ") + (cert.regularity.witness_verified ? "yes" : "no"));
    cert.certified = cert.regularity.witness_verified;
    line(std::string("certified: ") + (cert.certified ? "yes" : "no"));
    return cert;
}

}  // namespace cdga
