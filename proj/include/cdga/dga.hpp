#pragma once

#include "cdga/element.hpp"
#include "cdga/linalg.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdga {

// Free commutative cochain algebra: generators with a degree +1 differential,
// validated square-zero and simply connected (no degree-1 generators).
struct CochainAlgebra {
    Algebra alg;
    std::vector<Element> diff;  // one image per generator

    const Signature& signature() const { return alg.signature(); }
};

inline Element apply_differential(const CochainAlgebra& a, const Element& p) {
    return apply_derivation(p, a.diff, 1);
}

inline CochainAlgebra make_cochain_algebra(const Algebra& alg, std::vector<Element> diff) {
    const Signature& sig = alg.signature();
    if (diff.size() != sig.size())
        throw std::invalid_argument("differential must assign an image to every generator");
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (sig[i].degree == 1)
            throw std::invalid_argument("generator " + sig[i].name +
                                        " has degree 1; the algebra must be simply connected");
        const Element& d = diff[i];
        if (d.is_zero()) continue;
        const auto deg = d.cohomological_degree();
        if (!deg || *deg != sig[i].degree + 1)
            throw std::invalid_argument("d does not raise degree by 1 at " + sig[i].name);
    }
    CochainAlgebra a{alg, std::move(diff)};
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (!apply_differential(a, a.diff[i]).is_zero())
            throw std::invalid_argument("d^2 != 0 at " + sig[i].name);
    return a;
}

// Algebra morphism determined by generator images.
struct Morphism {
    CochainAlgebra source;
    CochainAlgebra target;
    std::vector<Element> images;  // per source generator, in the target algebra
};

inline Element apply_morphism(const Morphism& m, const Element& p) {
    return apply_algebra_map(p, m.images, m.target.alg);
}

inline Morphism make_morphism(const CochainAlgebra& source, const CochainAlgebra& target,
                              std::vector<Element> images) {
    const Signature& sig = source.signature();
    if (images.size() != sig.size())
        throw std::invalid_argument("morphism must assign an image to every generator");
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (images[i].is_zero()) continue;
        const auto deg = images[i].cohomological_degree();
        if (!deg || *deg != sig[i].degree)
            throw std::invalid_argument("image of " + sig[i].name + " does not preserve degree");
    }
    return Morphism{source, target, std::move(images)};
}

inline Morphism identity_morphism(const CochainAlgebra& a) {
    std::vector<Element> images;
    for (std::size_t i = 0; i < a.signature().size(); ++i) images.push_back(a.alg.generator(i));
    return Morphism{a, a, std::move(images)};
}

struct CochainCheck {
    bool ok = true;
    std::string failing_generator;
};

// α∘∂ = ∂∘α tested generator by generator; derivation extension makes this
// sufficient.
inline CochainCheck is_cochain_map(const Morphism& m) {
    const Signature& sig = m.source.signature();
    for (std::size_t i = 0; i < sig.size(); ++i) {
        const Element lhs = apply_morphism(m, m.source.diff[i]);
        const Element rhs = apply_differential(m.target, m.images[i]);
        if (lhs != rhs) return CochainCheck{false, sig[i].name};
    }
    return CochainCheck{};
}

// Cylinder object of a cochain algebra: generators v, v̄ (degree |v|-1),
// v̂ (degree |v|), interleaved per base generator, with
//   D(v) = ∂v,  D(v̄) = v̂,  D(v̂) = 0   (degree +1)
//   S(v) = v̄,  S(v̄) = S(v̂) = 0       (degree -1 derivation)
struct CylinderAlgebra {
    CochainAlgebra base;
    Algebra extended;
    std::vector<Element> d_images;
    std::vector<Element> s_images;

    static std::size_t slot(std::size_t base_index) { return 3 * base_index; }
    static std::size_t bar_slot(std::size_t base_index) { return 3 * base_index + 1; }
    static std::size_t hat_slot(std::size_t base_index) { return 3 * base_index + 2; }

    // Lift of a base element along v ↦ v.
    Element include(const Element& p) const {
        Element r = extended.zero();
        for (const auto& [m, c] : p.terms()) {
            Exponents e(extended.size(), 0);
            for (std::size_t i = 0; i < m.size(); ++i) e[slot(i)] = m[i];
            r.add_term(e, c);
        }
        return r;
    }

    Element differential(const Element& p) const { return apply_derivation(p, d_images, 1); }
    Element contraction(const Element& p) const { return apply_derivation(p, s_images, -1); }
};

inline CylinderAlgebra build_cylinder(const CochainAlgebra& base) {
    const Signature& sig = base.signature();
    std::vector<Generator> gens;
    gens.reserve(3 * sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) {
        gens.push_back(sig[i]);
        gens.push_back(Generator{sig[i].name + "bar", sig[i].degree - 1});
        gens.push_back(Generator{sig[i].name + "hat", sig[i].degree});
    }
    CylinderAlgebra cyl;
    cyl.base = base;
    cyl.extended = Algebra(Signature(std::move(gens)));
    for (std::size_t i = 0; i < sig.size(); ++i) {
        cyl.d_images.push_back(cyl.include(base.diff[i]));
        cyl.d_images.push_back(cyl.extended.generator(CylinderAlgebra::hat_slot(i)));
        cyl.d_images.push_back(cyl.extended.zero());
        cyl.s_images.push_back(cyl.extended.generator(CylinderAlgebra::bar_slot(i)));
        cyl.s_images.push_back(cyl.extended.zero());
        cyl.s_images.push_back(cyl.extended.zero());
    }
    return cyl;
}

// e^θ(v) = v + v̂ + Σ_{n≥1} (1/n!) (S∘D)ⁿ(v).  The sum is finite; each S
// application trades a unit of degree into a degree-lowered barred factor,
// bounding the iteration count by |v|.  Exceeding the bound signals a bug.
inline Element e_theta(const CylinderAlgebra& cyl, std::size_t base_index) {
    const int degree = cyl.base.signature()[base_index].degree;
    Element result = cyl.extended.generator(CylinderAlgebra::slot(base_index)) +
                     cyl.extended.generator(CylinderAlgebra::hat_slot(base_index));
    Element w = cyl.extended.generator(CylinderAlgebra::slot(base_index));
    BigInt factorial_n = 1;
    for (int n = 1;; ++n) {
        w = cyl.contraction(cyl.differential(w));
        if (w.is_zero()) break;
        if (n > degree) throw std::logic_error("e_theta iteration exceeded the degree bound");
        factorial_n *= n;
        result += Rational(BigInt(1), factorial_n) * w;
    }
    return result;
}

// Homotopy data: F maps cylinder generators into the base algebra and renders
// α homotopic to α′ when the three face/cochain conditions hold.
struct HomotopyCertificate {
    std::vector<Element> f_images;  // per extended generator
    Morphism alpha;
    Morphism alpha_prime;
};

struct HomotopyCheck {
    bool ok = true;
    std::string condition;
    std::string generator;
    HomotopyCertificate certificate;
};

inline HomotopyCheck check_homotopy(const CylinderAlgebra& cyl, const std::vector<Element>& f_images,
                                    const Morphism& alpha, const Morphism& alpha_prime) {
    const Signature& ext = cyl.extended.signature();
    const Signature& sig = cyl.base.signature();
    if (f_images.size() != ext.size())
        throw std::invalid_argument("homotopy must assign an image to every cylinder generator");

    HomotopyCheck out;
    out.certificate = HomotopyCertificate{f_images, alpha, alpha_prime};
    for (std::size_t k = 0; k < ext.size(); ++k) {
        const Element lhs = apply_algebra_map(cyl.d_images[k], f_images, cyl.base.alg);
        const Element rhs = apply_differential(cyl.base, f_images[k]);
        if (lhs != rhs) {
            out.ok = false;
            out.condition = "D-compatibility";
            out.generator = ext[k].name;
            return out;
        }
    }
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (f_images[CylinderAlgebra::slot(i)] != alpha.images[i]) {
            out.ok = false;
            out.condition = "bottom-face";
            out.generator = sig[i].name;
            return out;
        }
    }
    for (std::size_t i = 0; i < sig.size(); ++i) {
        const Element lhs = apply_algebra_map(e_theta(cyl, i), f_images, cyl.base.alg);
        if (lhs != alpha_prime.images[i]) {
            out.ok = false;
            out.condition = "top-face";
            out.generator = sig[i].name;
            return out;
        }
    }
    return out;
}

// Homotopy certificate built from a coboundary primitive: α and α′ must agree
// everywhere except one generator v, where their images differ by the
// coboundary ∂u.  The certificate sets F(v̂) = z′−z and F(v̄) = u there and
// zero on all other barred/hatted generators, then re-validates in full.
inline HomotopyCertificate homotopy_from_primitive(const CylinderAlgebra& cyl, const Morphism& alpha,
                                                   const Morphism& alpha_prime, std::size_t v_top,
                                                   const Element& u) {
    const Signature& sig = cyl.base.signature();
    if (v_top >= sig.size()) throw std::invalid_argument("top generator index out of range");
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i == v_top) continue;
        if (alpha.images[i] != alpha_prime.images[i])
            throw std::invalid_argument("maps disagree away from the designated generator, at " +
                                        sig[i].name);
    }
    const Element difference = alpha_prime.images[v_top] - alpha.images[v_top];  // z' - z
    if (apply_differential(cyl.base, u) != difference)
        throw std::invalid_argument("image difference at the designated generator is not d(u)");

    std::vector<Element> f(cyl.extended.size(), cyl.base.alg.zero());
    for (std::size_t i = 0; i < sig.size(); ++i) f[CylinderAlgebra::slot(i)] = alpha.images[i];
    f[CylinderAlgebra::hat_slot(v_top)] = difference;
    f[CylinderAlgebra::bar_slot(v_top)] = u;

    HomotopyCheck check = check_homotopy(cyl, f, alpha, alpha_prime);
    if (!check.ok)
        throw std::invalid_argument("constructed homotopy fails " + check.condition + " at " +
                                    check.generator);
    return check.certificate;
}

namespace detail {

inline std::map<Exponents, std::size_t> index_basis(const std::vector<Exponents>& basis) {
    std::map<Exponents, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    return index;
}

// Matrix of ∂ restricted to degree d, one row per degree-d monomial.
inline Matrix differential_matrix(const CochainAlgebra& a, const std::vector<Exponents>& domain,
                                  const std::vector<Exponents>& codomain) {
    const auto index = index_basis(codomain);
    Matrix m(domain.size(), Row(codomain.size(), Rational(0)));
    for (std::size_t r = 0; r < domain.size(); ++r) {
        const Element image = apply_differential(a, a.alg.monomial(domain[r]));
        for (const auto& [mono, c] : image.terms()) {
            const auto it = index.find(mono);
            if (it == index.end()) throw std::logic_error("differential left the expected degree");
            m[r][it->second] = c;
        }
    }
    return m;
}

}  // namespace detail

// dim H^d = dim ker ∂_d − dim im ∂_{d−1}, by exact-rational rank computation
// over the degree-d monomial basis.
inline int cohomology_dimension(const CochainAlgebra& a, int d, std::size_t cap = 20000) {
    if (d < 0) throw std::invalid_argument("negative degree");
    const std::vector<Exponents> basis_d = a.alg.monomial_basis(d, cap);
    if (basis_d.empty()) return 0;
    const std::vector<Exponents> basis_up = a.alg.monomial_basis(d + 1, cap);
    const int rank_d = matrix_rank(detail::differential_matrix(a, basis_d, basis_up));
    int rank_below = 0;
    if (d >= 1) {
        const std::vector<Exponents> basis_down = a.alg.monomial_basis(d - 1, cap);
        rank_below = matrix_rank(detail::differential_matrix(a, basis_down, basis_d));
    }
    return static_cast<int>(basis_d.size()) - rank_d - rank_below;
}

// Primitive of a cocycle: u with ∂u = z, or nullopt when z is not a
// coboundary.  Deterministic: free variables of the linear system are zero.
inline std::optional<Element> solve_coboundary(const CochainAlgebra& a, const Element& z,
                                               std::size_t cap = 20000) {
    if (z.is_zero()) return a.alg.zero();
    if (!z.is_homogeneous()) throw std::invalid_argument("cocycle must be homogeneous");
    if (!apply_differential(a, z).is_zero()) throw std::invalid_argument("not a cocycle");
    const int d = *z.cohomological_degree();
    if (d < 1) return std::nullopt;
    const std::vector<Exponents> basis_down = a.alg.monomial_basis(d - 1, cap);
    const std::vector<Exponents> basis_d = a.alg.monomial_basis(d, cap);
    const auto index = detail::index_basis(basis_d);

    Matrix m(basis_d.size(), Row(basis_down.size(), Rational(0)));
    for (std::size_t c = 0; c < basis_down.size(); ++c) {
        const Element image = apply_differential(a, a.alg.monomial(basis_down[c]));
        for (const auto& [mono, coef] : image.terms()) m[index.at(mono)][c] = coef;
    }
    Row b(basis_d.size(), Rational(0));
    for (const auto& [mono, coef] : z.terms()) b[index.at(mono)] = coef;

    const auto solution = solve_linear(std::move(m), b);
    if (!solution) return std::nullopt;
    Element u = a.alg.zero();
    for (std::size_t c = 0; c < basis_down.size(); ++c)
        if ((*solution)[c] != 0) u += a.alg.monomial(basis_down[c], (*solution)[c]);
    return u;
}

}  // namespace cdga
