#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdga/dga.hpp"
#include "cdga/f0_model.hpp"
#include "cdga/ideal.hpp"
#include "cdga/rational.hpp"

namespace cdga {

// ---------------------------------------------------------------------------
// Self-equivalences of an F0 model: maps of the form
//   x_i ↦ x_i + A_i,   y_i ↦ (supplied image),
// with each A_i an even decomposable shift and the whole map a cochain map.
// ---------------------------------------------------------------------------

struct SelfEquivalence {
    F0Model model;
    std::vector<Element> A;          // per even generator, in the full algebra
    std::vector<Element> y_images;   // per odd generator, in the full algebra
    Morphism map;                    // the induced self-map
    std::vector<Element> even_images;  // x_i + A_i inside the even subalgebra

    Element apply(const Element& p) const { return apply_morphism(map, p); }
    Element apply_even(const Element& p) const {
        return apply_algebra_map(p, even_images, model.even_part);
    }
    bool shifts_all_zero() const {
        for (const Element& a : A)
            if (!a.is_zero()) return false;
        return true;
    }
};

namespace detail {

// A shift is decomposable when every term is a product of at least two
// generators; such shifts induce the identity on the indecomposables.
inline bool is_decomposable_shift(const Element& p) {
    for (const auto& [m, c] : p.terms()) {
        int total = 0;
        for (int e : m) total += e;
        if (total < 2) return false;
    }
    return true;
}

}  // namespace detail

inline SelfEquivalence make_selfeq(const F0Model& model, std::vector<Element> A,
                                   std::vector<Element> y_images) {
    const std::size_t n = model.P.size();
    const Signature& sig = model.algebra.signature();
    if (A.size() != n) throw std::invalid_argument("expected one shift per even generator");
    if (y_images.size() != n) throw std::invalid_argument("expected one image per odd generator");

    std::vector<Element> images;
    images.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!A[i].valid()) throw std::invalid_argument("shift is default-constructed");
        if (!uses_only_even(A[i]))
            throw std::invalid_argument("shift for " + sig[i].name + " involves an odd generator");
        images.push_back(model.algebra.alg.generator(i) + A[i]);
    }
    for (std::size_t i = 0; i < n; ++i) images.push_back(y_images[i]);

    Morphism map = make_morphism(model.algebra, model.algebra, std::move(images));
    const CochainCheck cochain = is_cochain_map(map);
    if (!cochain.ok) {
        std::size_t k = sig.size();
        for (std::size_t i = 0; i < sig.size(); ++i)
            if (sig[i].name == cochain.failing_generator) k = i;
        const Element defect =
            apply_morphism(map, model.algebra.diff[k]) - apply_differential(model.algebra, map.images[k]);
        throw std::invalid_argument("cochain condition fails at " + cochain.failing_generator +
                                    "; defect " + to_string(defect));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!detail::is_decomposable_shift(A[i]))
            throw std::invalid_argument("shift for " + sig[i].name + " is not decomposable");

    SelfEquivalence s{model, std::move(A), std::move(y_images), std::move(map), {}};
    s.even_images.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        s.even_images.push_back(model.even_part.generator(i) +
                                restrict_even(s.A[i], model.even_part));
    return s;
}

inline SelfEquivalence identity_selfeq(const F0Model& model) {
    const std::size_t n = model.P.size();
    std::vector<Element> shifts(n, model.algebra.alg.zero());
    std::vector<Element> y_images;
    for (std::size_t i = 0; i < n; ++i) y_images.push_back(model.algebra.alg.generator(n + i));
    return make_selfeq(model, std::move(shifts), std::move(y_images));
}

// ---------------------------------------------------------------------------
// Cofactor decomposition: writes each defect α(P_j) − P_j as Σ_{i<j} U_i·P_i.
// A self-equivalence in normal form fixes P_1 and keeps every later defect in
// the ideal of the preceding differential images.
// ---------------------------------------------------------------------------

struct CofactorRow {
    std::size_t index = 0;           // 1-based pair index j
    Element defect;                  // α(P_j) − P_j, in the even subalgebra
    std::vector<Element> cofactors;  // U_i with defect = Σ_{i<j} U_i · P_i
};

inline std::vector<CofactorRow> cofactor_decomposition(const F0Model& model,
                                                       const std::vector<Element>& even_images) {
    const std::size_t n = model.P.size();
    if (even_images.size() != n)
        throw std::invalid_argument("expected one image per even generator");

    std::vector<CofactorRow> rows;
    std::vector<Element> prefix;
    for (std::size_t j = 0; j < n; ++j) {
        CofactorRow row;
        row.index = j + 1;
        row.defect = apply_algebra_map(model.P[j], even_images, model.even_part) - model.P[j];
        if (j == 0) {
            if (!row.defect.is_zero())
                throw std::invalid_argument(
                    "the first differential image is not fixed; defect " + to_string(row.defect));
        } else if (!row.defect.is_zero()) {
            const GroebnerBasis gb = groebner(prefix, model.even_part.context_ptr());
            DivisionResult div = divide_with_cofactors(row.defect, gb);
            if (!div.remainder.is_zero())
                throw std::invalid_argument(
                    "defect of pair " + std::to_string(j + 1) +
                    " lies outside the ideal of the preceding differential images; remainder " +
                    to_string(div.remainder));
            row.cofactors = express_in_generators(div, gb);
            Element back = model.even_part.zero();
            for (std::size_t i = 0; i < row.cofactors.size(); ++i)
                back += row.cofactors[i] * prefix[i];
            if (back != row.defect)
                throw std::logic_error("cofactor re-multiplication does not reproduce the defect");
        } else {
            row.cofactors.assign(j, model.even_part.zero());
        }
        rows.push_back(std::move(row));
        prefix.push_back(model.P[j]);
    }
    return rows;
}

inline std::vector<CofactorRow> cofactor_decomposition(const SelfEquivalence& alpha) {
    return cofactor_decomposition(alpha.model, alpha.even_images);
}

// ---------------------------------------------------------------------------
// Pivot expansion: P = Σ_k θ_k · pivot^k with pivot-free slices θ_k, each
// slice laid out on the x₁-exponent grid over the two axis variables:
//   θ_k = Σ_{1 ≤ i+j ≤ r_k} λ_{i,j} x₁^{a(i,j)} u^i v^j + ρ_k x₁^{b_k}.
// ---------------------------------------------------------------------------

struct SliceTable {
    bool defined = false;  // slice supported on x₁ and the two axis variables
    int r = 0;             // top row: the maximal i+j over grid terms
    std::map<std::pair<int, int>, Rational> lambda;  // (i,j) → grid coefficient
    std::map<std::pair<int, int>, long long> a_exp;  // admissible slots → x₁ exponent
    std::vector<std::pair<int, int>> absent;         // slots with no admissible x₁ exponent
    Rational rho = 0;       // coefficient of the pure x₁ term
    long long b = 0;        // its x₁ exponent, |θ_k| / |x₁|
    bool b_integral = false;
};

inline Rational slice_lambda(const SliceTable& t, int i, int j) {
    const auto it = t.lambda.find({i, j});
    return it == t.lambda.end() ? Rational(0) : it->second;
}

struct PivotExpansion {
    static constexpr std::size_t no_axis = static_cast<std::size_t>(-1);

    Element P;                   // the expanded polynomial
    std::size_t pivot = 0;       // pivot variable slot
    std::size_t axis_u = no_axis;  // x₂-role slot
    std::size_t axis_v = no_axis;  // x₃-role slot
    int s = 0;                   // pivot degree of P
    std::vector<Element> theta;  // θ_0 .. θ_s, pivot-free
    std::vector<SliceTable> slices;
    bool table_defined = false;  // every slice supported on the grid variables
};

inline PivotExpansion pivot_expand(const Element& P, std::size_t pivot) {
    if (!P.valid()) throw std::invalid_argument("cannot expand a default-constructed element");
    if (P.is_zero()) throw std::invalid_argument("cannot expand the zero polynomial");
    if (!uses_only_even(P)) throw std::invalid_argument("the polynomial involves an odd generator");
    if (!P.is_homogeneous()) throw std::invalid_argument("the polynomial must be homogeneous");
    const OrderContext& ctx = P.context();
    if (pivot >= ctx.sig.size() || ctx.odd[pivot])
        throw std::invalid_argument("the pivot must be an even generator");
    if (pivot == 0)
        throw std::invalid_argument("the pivot cannot be the leading even generator");

    PivotExpansion exp;
    exp.P = P;
    exp.pivot = pivot;
    for (std::size_t i = 1; i < ctx.sig.size(); ++i) {
        if (ctx.odd[i] || i == pivot) continue;
        if (exp.axis_u == PivotExpansion::no_axis) {
            exp.axis_u = i;
        } else if (exp.axis_v == PivotExpansion::no_axis) {
            exp.axis_v = i;
            break;
        }
    }

    const long long w1 = ctx.weights[0];
    const long long wu = exp.axis_u == PivotExpansion::no_axis ? 0 : ctx.weights[exp.axis_u];
    const long long wv = exp.axis_v == PivotExpansion::no_axis ? 0 : ctx.weights[exp.axis_v];
    const long long total = *P.cohomological_degree();

    exp.s = P.deg_in(pivot);
    exp.table_defined = true;
    for (int k = 0; k <= exp.s; ++k) {
        const Element theta = P.coeff_wrt(pivot, k);
        SliceTable t;
        const long long deg_theta = total - k * ctx.weights[pivot];
        t.b_integral = deg_theta >= 0 && deg_theta % w1 == 0;
        t.b = t.b_integral ? deg_theta / w1 : 0;

        t.defined = true;
        for (const auto& [m, c] : theta.terms()) {
            for (std::size_t slot = 1; slot < m.size(); ++slot)
                if (m[slot] != 0 && slot != exp.axis_u && slot != exp.axis_v) t.defined = false;
        }
        if (t.defined) {
            for (const auto& [m, c] : theta.terms()) {
                const int i = exp.axis_u == PivotExpansion::no_axis ? 0 : m[exp.axis_u];
                const int j = exp.axis_v == PivotExpansion::no_axis ? 0 : m[exp.axis_v];
                if (i + j == 0) {
                    t.rho = c;
                } else {
                    t.lambda[{i, j}] = c;
                    t.r = std::max(t.r, i + j);
                }
            }
            for (int i = 0; i <= t.r; ++i) {
                for (int j = 0; i + j <= t.r; ++j) {
                    if (i + j == 0) continue;
                    const long long num = deg_theta - i * wu - j * wv;
                    if (num >= 0 && num % w1 == 0)
                        t.a_exp[{i, j}] = num / w1;
                    else
                        t.absent.push_back({i, j});
                }
            }
            for (const auto& slot : t.absent)
                if (slice_lambda(t, slot.first, slot.second) != 0)
                    throw std::invalid_argument(
                        "a grid slot with no admissible exponent carries a nonzero coefficient");
        } else {
            exp.table_defined = false;
        }
        exp.theta.push_back(theta);
        exp.slices.push_back(std::move(t));
    }
    return exp;
}

// ---------------------------------------------------------------------------
// Slice transform: when a substitution fixes the expanded polynomial, each
// slice image is the alternating binomial combination of the higher slices:
//   α(θ_i) = θ_i + Σ_{k=1}^{s−i} (−1)^k C(k+i, k) θ_{k+i} A₄^k.
// ---------------------------------------------------------------------------

inline std::vector<bool> check_slice_transform(const Algebra& ring, const PivotExpansion& exp,
                                               const std::vector<Element>& even_images) {
    if (even_images.size() != ring.size())
        throw std::invalid_argument("expected one image per generator");
    if (apply_algebra_map(exp.P, even_images, ring) != exp.P)
        throw std::invalid_argument("the map does not fix the expanded polynomial");

    const Element A4 = even_images[exp.pivot] - ring.generator(exp.pivot);
    std::vector<bool> out;
    for (int i = 0; i <= exp.s; ++i) {
        const Element lhs = apply_algebra_map(exp.theta[i], even_images, ring);
        Element rhs = exp.theta[i];
        Element a4_pow = ring.one();
        for (int k = 1; k + i <= exp.s; ++k) {
            a4_pow = a4_pow * A4;
            Rational c(binomial(k + i, k));
            if (k % 2) c = -c;
            rhs += c * (exp.theta[i + k] * a4_pow);
        }
        out.push_back(lhs == rhs);
    }
    return out;
}

inline std::vector<bool> check_slice_transform(const SelfEquivalence& alpha,
                                               const PivotExpansion& exp) {
    return check_slice_transform(alpha.model.even_part, exp, alpha.even_images);
}

// ---------------------------------------------------------------------------
// Triviality check: a self-equivalence with every even shift zero perturbs
// each y_i by an odd cocycle; peeling those perturbations one generator at a
// time yields a chain of elementary homotopies down to the identity.
// ---------------------------------------------------------------------------

struct TrivialityStep {
    std::string generator;   // odd generator name
    Element perturbation;    // ω = α(y) − y, an odd cocycle
    Element primitive;       // u with d(u) = −ω
    HomotopyCertificate certificate;
};

struct TrivialityResult {
    bool certified = false;
    std::string verdict;
    std::vector<TrivialityStep> steps;
};

inline TrivialityResult triviality_check(const SelfEquivalence& alpha) {
    TrivialityResult out;
    if (!alpha.shifts_all_zero()) {
        out.verdict = "inconclusive: an even generator is shifted";
        return out;
    }
    const F0Model& model = alpha.model;
    const std::size_t n = model.P.size();
    const CylinderAlgebra cyl = build_cylinder(model.algebra);
    std::vector<Element> current = alpha.map.images;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t slot = n + i;
        const Element target = model.algebra.alg.generator(slot);
        const Element omega = current[slot] - target;
        if (omega.is_zero()) continue;
        const auto u = solve_coboundary(model.algebra, -omega);
        if (!u)
            throw std::invalid_argument("no primitive for the perturbation at " +
                                        model.algebra.signature()[slot].name +
                                        "; the input is not an F0 model");
        const Morphism from = make_morphism(model.algebra, model.algebra, current);
        std::vector<Element> next = current;
        next[slot] = target;
        const Morphism to = make_morphism(model.algebra, model.algebra, next);

        TrivialityStep step;
        step.generator = model.algebra.signature()[slot].name;
        step.perturbation = omega;
        step.primitive = *u;
        step.certificate = homotopy_from_primitive(cyl, from, to, slot, *u);
        out.steps.push_back(std::move(step));
        current = std::move(next);
    }
    out.certified = true;
    out.verdict = "homotopic to identity";
    return out;
}

// ---------------------------------------------------------------------------
// Constraint analysis for four-pair models.  The route is decided by the two
// top-corner coefficients of the top slice of P₁:
//   λ₀ = λ_{0,r},  λ₁ = λ_{1,r−1}.
// ---------------------------------------------------------------------------

struct ConstraintSet {
    std::string route;     // "degenerate-top-slice" | "vanishing-coefficient" |
                           // "vanishing-shift" | "full-constraint"
    bool trivial = false;  // the shifts are forced to vanish; map homotopy-trivial
    bool ok = true;        // no derived equation is violated
    std::vector<std::string> violations;
    bool has_scale = false;  // ω and D are defined (full-constraint route)
    Rational omega = 0;      // x₂-role shift scale: A₂ = ω x₁^{|x₂|/|x₁|}
    Rational D = 0;          // root ratio −λ₁ / (r λ₀)
    Element form;            // invariant form r λ₀ x₁^{|x₂|/|x₁|} x₃ + λ₁ x₁^{|x₃|/|x₁|} x₂
    Element A2, A3, A4;      // the shifts, in the even subalgebra
    long long degree_step = 0;  // (|x₃| − |x₂|) / |x₁|
    bool degree_step_integral = false;
    // On the vanishing-coefficient route with λ₀ ≠ 0, λ₁ = 0: whether the top
    // slice avoids the x₂-role variable (the vanishing cascade).
    std::optional<bool> top_slice_x2_free;
    std::optional<TrivialityResult> homotopy;  // attached for model-level trivial verdicts
};

inline std::string constraint_route(const PivotExpansion& exp, const Element& A2,
                                    const Element& A3, const Element& A4) {
    (void)A3;
    (void)A4;
    const SliceTable& top = exp.slices[static_cast<std::size_t>(exp.s)];
    if (!top.defined || top.r < 1) return "degenerate-top-slice";
    const Rational l0 = slice_lambda(top, 0, top.r);
    const Rational l1 = slice_lambda(top, 1, top.r - 1);
    if (l0 == 0 || l1 == 0) return "vanishing-coefficient";
    if (A2.is_zero()) return "vanishing-shift";
    return "full-constraint";
}

namespace detail {

inline void require_shift_shape(const Element& a, const OrderContext& ctx, std::size_t slot,
                                const char* what) {
    if (!a.valid()) throw std::invalid_argument(std::string(what) + " is default-constructed");
    if (a.is_zero()) return;
    if (!uses_only_even(a)) throw std::invalid_argument(std::string(what) + " involves an odd generator");
    const auto deg = a.cohomological_degree();
    if (!deg || *deg != ctx.weights[slot])
        throw std::invalid_argument(std::string(what) +
                                    " must be homogeneous of the generator's degree");
}

// A pure base power c·x₁^k of the same degree as the generator in `slot`;
// nullopt when the element has any other shape.
inline std::optional<Rational> base_power_scale(const Element& a, const OrderContext& ctx,
                                                std::size_t slot) {
    if (ctx.weights[slot] % ctx.weights[0] != 0) return std::nullopt;
    const long long k = ctx.weights[slot] / ctx.weights[0];
    if (a.term_count() != 1) return std::nullopt;
    const auto& [m, c] = *a.terms().begin();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == 0) {
            if (m[i] != k) return std::nullopt;
        } else if (m[i] != 0) {
            return std::nullopt;
        }
    }
    return c;
}

}  // namespace detail

inline ConstraintSet derive_constraints_core(const Algebra& ring, const PivotExpansion& exp,
                                             const Element& A2, const Element& A3,
                                             const Element& A4) {
    if (exp.pivot != 3 || exp.axis_u != 1 || exp.axis_v != 2)
        throw std::invalid_argument(
            "the constraint analysis expects four even generators with the last one as pivot");
    const OrderContext& ctx = exp.P.context();
    detail::require_shift_shape(A2, ctx, 1, "the x2-role shift");
    detail::require_shift_shape(A3, ctx, 2, "the x3-role shift");
    detail::require_shift_shape(A4, ctx, 3, "the pivot shift");

    const long long w1 = ctx.weights[0];
    const long long w2 = ctx.weights[1];
    const long long w3 = ctx.weights[2];

    ConstraintSet out;
    out.A2 = A2;
    out.A3 = A3;
    out.A4 = A4;
    out.degree_step_integral = (w3 - w2) % w1 == 0 && w3 >= w2;
    out.degree_step = out.degree_step_integral ? (w3 - w2) / w1 : 0;
    out.form = ring.zero();

    std::vector<Element> images;
    for (std::size_t i = 0; i < ring.size(); ++i) images.push_back(ring.generator(i));
    images[1] += A2;
    images[2] += A3;
    images[3] += A4;
    if (apply_algebra_map(exp.P, images, ring) != exp.P)
        out.violations.push_back("the map does not fix the first differential image");

    out.route = constraint_route(exp, A2, A3, A4);
    const SliceTable& top = exp.slices[static_cast<std::size_t>(exp.s)];

    if (out.route == "degenerate-top-slice") {
        out.trivial = A2.is_zero() && A3.is_zero() && A4.is_zero() && out.violations.empty();
        out.ok = out.violations.empty();
        return out;
    }

    const int r = top.r;
    const Rational l0 = slice_lambda(top, 0, r);
    const Rational l1 = slice_lambda(top, 1, r - 1);

    if (out.route == "vanishing-coefficient") {
        if (l0 == 0) {
            // Both corner chains collapse: the x₂- and x₃-role shifts are forced.
            if (!A2.is_zero())
                out.violations.push_back("the x2-role shift must vanish on the vanishing-coefficient route");
            if (!A3.is_zero())
                out.violations.push_back("the x3-role shift must vanish on the vanishing-coefficient route");
        } else {
            // λ₀ ≠ 0, λ₁ = 0: the corner equation forces the x₃-role shift, and
            // the cascade empties the x₂-column of the top slice.  The x₂-role
            // shift is then forced whenever P₁ depends on that variable at all.
            if (!A3.is_zero())
                out.violations.push_back("the x3-role shift must vanish on the vanishing-coefficient route");
            out.top_slice_x2_free = exp.theta[static_cast<std::size_t>(exp.s)].deg_in(1) == 0;
            if (!*out.top_slice_x2_free && !A2.is_zero())
                out.violations.push_back(
                    "the top slice depends on the x2-role variable despite the vanishing cascade");
            if (exp.P.deg_in(1) > 0 && !A2.is_zero())
                out.violations.push_back("the x2-role shift must vanish on the vanishing-coefficient route");
        }
        if (exp.s >= 1 && !A4.is_zero())
            out.violations.push_back("the pivot shift must vanish when the pivot degree is positive");
        out.ok = out.violations.empty();
        out.trivial = out.ok && A2.is_zero() && A3.is_zero() && A4.is_zero();
        return out;
    }

    if (out.route == "vanishing-shift") {
        if (!A3.is_zero())
            out.violations.push_back("the x3-role shift must vanish when the x2-role shift does");
        if (exp.s >= 1 && !A4.is_zero())
            out.violations.push_back("the pivot shift must vanish when the pivot degree is positive");
        out.ok = out.violations.empty();
        out.trivial = out.ok && A3.is_zero() && A4.is_zero();
        return out;
    }

    // Full-constraint route: λ₀, λ₁ ≠ 0 and A₂ ≠ 0.
    if (w2 % w1 != 0) {
        out.violations.push_back(
            "the degree of the x2-role variable is not a multiple of the base degree");
        out.ok = false;
        return out;
    }
    if (w3 % w1 != 0) {
        out.violations.push_back(
            "the degree of the x3-role variable is not a multiple of the base degree");
        out.ok = false;
        return out;
    }

    const auto omega = detail::base_power_scale(A2, ctx, 1);
    if (!omega) {
        out.violations.push_back("the x2-role shift is not a rational multiple of the base power");
        out.ok = false;
        return out;
    }
    out.omega = *omega;
    out.D = -l1 / (Rational(r) * l0);
    out.has_scale = true;

    Exponents e3(ctx.sig.size(), 0);
    e3[0] = static_cast<int>(w3 / w1);
    const Element expected_A3 = ring.monomial(e3, out.omega * out.D);
    if (A3 != expected_A3)
        out.violations.push_back("the x3-role shift disagrees with its derived value");

    if (!A4.is_zero() && !detail::base_power_scale(A4, ctx, 3))
        out.violations.push_back("the pivot shift is not a rational multiple of the base power");

    // Invariant form and its designated root.
    Exponents f3(ctx.sig.size(), 0);
    f3[0] = static_cast<int>(w2 / w1);
    f3[2] = 1;
    Exponents f2(ctx.sig.size(), 0);
    f2[0] = static_cast<int>(w3 / w1);
    f2[1] = 1;
    out.form = ring.monomial(f3, Rational(r) * l0) + ring.monomial(f2, l1);
    if (out.degree_step_integral) {
        Exponents root(ctx.sig.size(), 0);
        root[0] = static_cast<int>(out.degree_step);
        root[1] = 1;
        if (!out.form.substitute(2, ring.monomial(root, out.D)).is_zero())
            throw std::logic_error("the designated root does not annihilate the derived form");
        if (apply_algebra_map(out.form, images, ring) != out.form)
            out.violations.push_back("the derived form is not fixed by the map");
    } else {
        out.violations.push_back(
            "the degree step between the axis variables is not a nonnegative multiple of the base degree");
    }

    // Row coefficient laws on the top slice: every row is the binomial
    // expansion of its leading entry with ratio q = λ₁ / (r λ₀) = −D.
    const Rational q = l1 / (Rational(r) * l0);
    for (int m = 1; m <= r; ++m) {
        const Rational lead = slice_lambda(top, 0, m);
        for (int sigma = 0; sigma <= m; ++sigma) {
            const Rational expected = Rational(binomial(m, sigma)) * lead * rational_pow(q, sigma);
            if (slice_lambda(top, sigma, m - sigma) != expected) {
                if (m == r)
                    out.violations.push_back("top-row coefficient law fails at position " +
                                             std::to_string(sigma));
                else
                    out.violations.push_back("row coefficient law fails in row " + std::to_string(m) +
                                             " at position " + std::to_string(sigma));
            }
        }
    }

    // Corner equation: with the pivot shift linear in its slice expansion, the
    // x₃^r pivot^{s−1} coefficient of α(P₁) − P₁ collects the top slice once
    // and every row m ≥ r of the next slice; it must vanish.
    if (exp.s >= 1) {
        const SliceTable& next = exp.slices[static_cast<std::size_t>(exp.s - 1)];
        Element corner = ring.zero();
        const auto a_top = top.a_exp.find({0, r});
        if (a_top != top.a_exp.end()) {
            Exponents e(ctx.sig.size(), 0);
            e[0] = static_cast<int>(a_top->second);
            corner += Rational(exp.s) * (ring.monomial(e, l0) * A4);
        }
        for (int m = r; m <= next.r; ++m) {
            for (int qq = 0; qq <= m - r; ++qq) {
                if (m == r && qq == 0) continue;
                const Rational lam = slice_lambda(next, qq, m - qq);
                if (lam == 0) continue;
                const auto a_it = next.a_exp.find({qq, m - qq});
                if (a_it == next.a_exp.end()) continue;
                Exponents e(ctx.sig.size(), 0);
                e[0] = static_cast<int>(a_it->second);
                Element term = ring.monomial(e, Rational(binomial(m - qq, r)) * lam);
                for (int p = 0; p < qq; ++p) term = term * A2;
                for (int p = 0; p < m - qq - r; ++p) term = term * A3;
                corner += term;
            }
        }
        if (!corner.is_zero())
            out.violations.push_back("the corner coefficient equation fails; residual " +
                                     to_string(corner));
    }

    out.ok = out.violations.empty();
    out.trivial = false;
    return out;
}

inline ConstraintSet derive_constraints(const SelfEquivalence& alpha, const PivotExpansion& exp) {
    const F0Model& model = alpha.model;
    if (model.P.size() != 4)
        throw std::invalid_argument("the constraint analysis covers four-pair models");
    if (exp.P != model.P[0])
        throw std::invalid_argument("the expansion must cover the first differential image");
    if (exp.pivot != 3)
        throw std::invalid_argument("the expansion pivot must be the last even generator");
    const Algebra& ring = model.even_part;
    ConstraintSet out = derive_constraints_core(
        ring, exp, restrict_even(alpha.A[1], ring), restrict_even(alpha.A[2], ring),
        restrict_even(alpha.A[3], ring));
    if (out.trivial && alpha.shifts_all_zero()) out.homotopy = triviality_check(alpha);
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form slice coefficients.  With A₂ = ω x₁^{|x₂|/|x₁|} and
// A₃ = ω D x₁^{|x₃|/|x₁|}, the coefficients of α(θ_k) − θ_k on the axes, in
// the interior, and after collapsing x₃ ↦ D x₁^δ x₂ admit closed forms; each
// is compared against the coefficient extracted from the actual difference.
// ---------------------------------------------------------------------------

struct CoefficientEntry {
    std::string role;  // "x3-axis" | "x2-axis" | "interior" | "collapsed-axis"
    int slice = 0;     // slice index k
    int i = 0;         // axis exponent, or the x₂-role exponent σ
    int j = 0;         // interior x₃-role exponent τ
    Element closed;
    Element brute;
    bool ok = false;
};

struct CoefficientCheck {
    bool ok = true;
    std::vector<CoefficientEntry> entries;
};

inline CoefficientCheck slice_coefficient_check(const PivotExpansion& exp,
                                                const ConstraintSet& constraints) {
    const SliceTable& top = exp.slices[static_cast<std::size_t>(exp.s)];
    if (top.defined && top.r >= 1 && slice_lambda(top, 0, top.r) == 0)
        throw std::invalid_argument(
            "the top corner coefficient vanishes; the vanishing-coefficient route applies");
    if (!constraints.has_scale)
        throw std::invalid_argument("the constraint set does not define the scale pair");
    if (exp.axis_u == PivotExpansion::no_axis || exp.axis_v == PivotExpansion::no_axis)
        throw std::invalid_argument("the expansion does not expose both axis variables");

    const OrderContext& ctx = exp.P.context();
    const Algebra ring(ctx.sig);
    const std::size_t u = exp.axis_u;
    const std::size_t v = exp.axis_v;
    const long long w1 = ctx.weights[0];
    const long long wu = ctx.weights[u];
    const long long wv = ctx.weights[v];
    const Rational& omega = constraints.omega;
    const Rational& D = constraints.D;

    std::vector<Element> images;
    for (std::size_t i = 0; i < ring.size(); ++i) images.push_back(ring.generator(i));
    images[u] += constraints.A2;
    images[v] += constraints.A3;

    CoefficientCheck check;
    const auto push = [&](std::string role, int k, int i, int j, const Rational& scalar,
                          long long power, Element brute) {
        CoefficientEntry entry;
        entry.role = std::move(role);
        entry.slice = k;
        entry.i = i;
        entry.j = j;
        entry.brute = std::move(brute);
        entry.closed = ring.zero();
        bool representable = true;
        if (scalar != 0) {
            if (power < 0) {
                representable = false;
            } else {
                Exponents e(ctx.sig.size(), 0);
                e[0] = static_cast<int>(power);
                entry.closed = ring.monomial(e, scalar);
            }
        }
        entry.ok = representable && entry.closed == entry.brute;
        if (!entry.ok) check.ok = false;
        check.entries.push_back(std::move(entry));
    };

    for (int k = 0; k <= exp.s; ++k) {
        const SliceTable& t = exp.slices[static_cast<std::size_t>(k)];
        if (!t.defined) continue;
        const Element delta =
            apply_algebra_map(exp.theta[static_cast<std::size_t>(k)], images, ring) -
            exp.theta[static_cast<std::size_t>(k)];
        const long long deg_theta = *exp.P.cohomological_degree() - k * ctx.weights[exp.pivot];
        const int r = t.r;

        for (int i = 0; i <= r; ++i) {
            Rational scalar = 0;
            for (int j = 0; j <= r - i - 1; ++j) {
                Rational inner = 0;
                for (int sg = 0; sg <= r - i - j; ++sg)
                    inner += Rational(binomial(r - j - sg, i)) * slice_lambda(t, sg, r - j - sg) *
                             rational_pow(D, r - i - j - sg);
                scalar += rational_pow(omega, r - i - j) * inner;
            }
            const long long num = deg_theta - i * wv;
            push("x3-axis", k, i, 0, scalar, num % w1 == 0 ? num / w1 : -1,
                 delta.coeff_wrt(v, i).coeff_wrt(u, 0));
        }
        for (int i = 1; i <= r; ++i) {
            Rational scalar = 0;
            for (int j = 0; j <= r - i - 1; ++j) {
                Rational inner = 0;
                for (int sg = 0; sg <= r - i - j; ++sg)
                    inner += Rational(binomial(r - j - sg, i)) * slice_lambda(t, r - j - sg, sg) *
                             rational_pow(D, sg);
                scalar += rational_pow(omega, r - i - j) * inner;
            }
            const long long num = deg_theta - i * wu;
            push("x2-axis", k, i, 0, scalar, num % w1 == 0 ? num / w1 : -1,
                 delta.coeff_wrt(u, i).coeff_wrt(v, 0));
        }
        for (int sg = 1; sg <= r; ++sg) {
            for (int tau = 1; sg + tau <= r - 1; ++tau) {
                Rational scalar = 0;
                for (int j = 0; j <= r - (sg + tau) - 1; ++j) {
                    Rational inner = 0;
                    for (int tt = 0; tt <= r - j - (sg + tau); ++tt)
                        inner += Rational(binomial(sg + tt, sg)) *
                                 Rational(binomial(r - j - sg - tt, tau)) *
                                 slice_lambda(t, sg + tt, r - j - sg - tt) *
                                 rational_pow(D, r - (sg + tau) - j - tt);
                    scalar += rational_pow(omega, r - (sg + tau) - j) * inner;
                }
                const long long num = deg_theta - sg * wu - tau * wv;
                push("interior", k, sg, tau, scalar, num % w1 == 0 ? num / w1 : -1,
                     delta.coeff_wrt(u, sg).coeff_wrt(v, tau));
            }
        }
        if (constraints.degree_step_integral) {
            Exponents root(ctx.sig.size(), 0);
            root[0] = static_cast<int>(constraints.degree_step);
            root[u] = 1;
            const Element collapsed = delta.substitute(v, ring.monomial(root, D));
            for (int i = 1; i <= r - 1; ++i) {
                Rational scalar = 0;
                for (int j = 0; j <= i - 1; ++j) {
                    Rational inner = 0;
                    for (int tt = 0; tt <= r - j; ++tt)
                        inner += slice_lambda(t, tt, r - j - tt) * rational_pow(D, r - j - tt);
                    scalar += rational_pow(omega, i - j) * Rational(binomial(r - j, r - i)) * inner;
                }
                const long long num = deg_theta - (r - i) * wu;
                push("collapsed-axis", k, i, 0, scalar, num % w1 == 0 ? num / w1 : -1,
                     collapsed.coeff_wrt(u, r - i));
            }
        }
    }
    return check;
}

}  // namespace cdga
