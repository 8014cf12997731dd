#pragma once

#include <cstdint>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdga/decompose.hpp"
#include "cdga/element.hpp"
#include "cdga/rational.hpp"
#include "cdga/rng.hpp"
#include "cdga/selfeq.hpp"
#include "cdga/signature.hpp"

namespace cdga {

// ---------------------------------------------------------------------------
// Randomized identity suite.  Every closed-form coefficient law used by the
// constraint analysis is re-derived here by brute-force expansion on seeded
// random instances, so a formula transcription error cannot hide behind the
// code that applies it.  The report is deterministic for a fixed (seed,
// trials) pair: each trial draws from an independent stream keyed by the
// section and the trial index.
// ---------------------------------------------------------------------------

struct IdentityReport {
    bool ok = true;
    long long checks = 0;
    long long failures = 0;
    std::string text;
};

namespace detail {

class SuiteSection {
public:
    explicit SuiteSection(std::string name) : name_(std::move(name)) {}

    // Record one check; `describe` is evaluated only when the check fails.
    template <typename Describe>
    void record(bool pass, Describe&& describe) {
        ++checks_;
        if (!pass) {
            ++failures_;
            lines_.push_back("failure " + name_ + ": " + describe());
        }
    }

    void note_exception(int trial, const char* what) {
        ++checks_;
        ++failures_;
        lines_.push_back("failure " + name_ + ": trial " + std::to_string(trial) +
                         " raised: " + what);
    }

    const std::string& name() const { return name_; }
    long long checks() const { return checks_; }
    long long failures() const { return failures_; }
    const std::vector<std::string>& lines() const { return lines_; }

private:
    std::string name_;
    long long checks_ = 0;
    long long failures_ = 0;
    std::vector<std::string> lines_;
};

// One stream per (section, trial) so a section never perturbs another and
// trials can be sharded without changing the outcome.
inline SplitMix64 suite_rng(std::uint64_t seed, std::uint64_t salt, std::uint64_t trial) {
    return trial_rng(seed ^ (salt * 0x9E3779B97F4A7C15ULL), trial);
}

template <typename Body>
void run_suite_trials(SuiteSection& sec, int trials, Body&& body) {
    for (int trial = 0; trial < trials; ++trial) {
        try {
            body(trial);
        } catch (const std::exception& ex) {
            sec.note_exception(trial, ex.what());
        }
    }
}

inline Rational suite_nonzero(SplitMix64& rng, int bound) {
    const long long c = rng.range(-bound, bound);
    if (c != 0) return Rational(c);
    return Rational(1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(bound))));
}

// Random polynomial over the first `slots` generators: up to `terms` monomials
// with per-variable exponents at most `max_exp` and integer coefficients of
// magnitude at most `bound`.  May come out zero.
inline Element suite_poly(const Algebra& alg, SplitMix64& rng, std::size_t slots, int max_exp,
                          int terms, int bound) {
    Element out = alg.zero();
    for (int t = 0; t < terms; ++t) {
        Exponents m(alg.size(), 0);
        for (std::size_t v = 0; v < slots; ++v)
            m[v] = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_exp) + 1));
        const long long c = rng.range(-bound, bound);
        if (c == 0) continue;
        out += alg.monomial(m, Rational(c));
    }
    return out;
}

inline Element x1_power(const Algebra& alg, int e, const Rational& c) {
    Exponents m(alg.size(), 0);
    m[0] = e;
    return alg.monomial(m, c);
}

inline Element grid_monomial(const Algebra& alg, int a, int i, int j, const Rational& c) {
    Exponents m(alg.size(), 0);
    m[0] = a;
    m[1] = i;
    m[2] = j;
    return alg.monomial(m, c);
}

inline Algebra suite_even_algebra(const std::vector<int>& degrees) {
    std::vector<std::pair<std::string, int>> gens;
    for (std::size_t i = 0; i < degrees.size(); ++i)
        gens.emplace_back("x" + std::to_string(i + 1), degrees[i]);
    return Algebra(make_signature(gens));
}

// --- alternating-binomial-sum: sum_{k=0}^{m} (-1)^k C(m,k) = 0 -------------

inline void suite_alternating_binomial(SuiteSection& sec, std::uint64_t seed, int trials) {
    const auto check_m = [&](int m) {
        BigInt sum = 0;
        for (int k = 0; k <= m; ++k) {
            const BigInt term = binomial(m, k);
            sum += (k % 2) ? -term : term;
        }
        sec.record(sum == 0, [&] {
            return "the alternating sum is nonzero at order " + std::to_string(m);
        });
    };
    for (int m = 1; m <= 12; ++m) check_m(m);
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 1, static_cast<std::uint64_t>(trial));
        check_m(1 + static_cast<int>(rng.below(40)));
    });
}

// --- binomial-product-identity: C(i+k,k) C(j,j-i-k) = C(j,i) C(j-i,k) ------

inline void suite_binomial_product(SuiteSection& sec, std::uint64_t seed, int trials) {
    const auto check_triple = [&](int i, int k, int j) {
        const BigInt lhs = binomial(i + k, k) * binomial(j, j - i - k);
        const BigInt rhs = binomial(j, i) * binomial(j - i, k);
        sec.record(lhs == rhs, [&] {
            return "the product identity fails at i " + std::to_string(i) + " k " +
                   std::to_string(k) + " j " + std::to_string(j);
        });
    };
    for (int j = 0; j <= 10; ++j)
        for (int i = 0; i <= j; ++i)
            for (int k = 0; i + k <= j; ++k) check_triple(i, k, j);
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 2, static_cast<std::uint64_t>(trial));
        const int j = static_cast<int>(rng.below(41));
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(j - i) + 1));
        check_triple(i, k, j);
    });
}

// --- slice-transform-inversion ---------------------------------------------
// The closed-form slice images under a pivot shift are the alternating
// binomial combinations of the higher slices.  Substituting those images into
// the shifted expansion must reproduce the original polynomial exactly; this
// is the coefficient-matching content of requiring the first differential
// image to be fixed.

inline void suite_slice_transform(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 3, static_cast<std::uint64_t>(trial));
        const std::size_t n_even = 2 + rng.below(3);
        const Algebra alg = suite_even_algebra(std::vector<int>(n_even, 2));
        const std::size_t pivot = n_even - 1;
        const int s = 1 + static_cast<int>(rng.below(4));

        std::vector<Element> theta;
        for (int k = 0; k <= s; ++k) theta.push_back(suite_poly(alg, rng, pivot, 2, 3, 10));
        if (theta[static_cast<std::size_t>(s)].is_zero())
            theta[static_cast<std::size_t>(s)] = alg.generator(0);
        Element shift = suite_poly(alg, rng, pivot, 2, 2, 10);
        if (shift.is_zero()) shift = alg.generator(0);

        const Element shifted_pivot = alg.generator(pivot) + shift;
        Element original = alg.zero();
        Element reassembled = alg.zero();
        for (int i = 0; i <= s; ++i) {
            Element image = theta[static_cast<std::size_t>(i)];
            Element shift_pow = alg.one();
            for (int k = 1; i + k <= s; ++k) {
                shift_pow = shift_pow * shift;
                Rational c(binomial(k + i, k));
                if (k % 2) c = -c;
                image += c * (theta[static_cast<std::size_t>(i + k)] * shift_pow);
            }
            reassembled += image * shifted_pivot.pow(i);
            original += theta[static_cast<std::size_t>(i)] * alg.generator(pivot).pow(i);
        }
        sec.record(reassembled == original, [&] {
            return "trial " + std::to_string(trial) +
                   ": the transformed slices do not invert the pivot shift";
        });
    });
}

// --- slice-coefficient-closed-forms -----------------------------------------
// Axis, interior, and collapsed-axis coefficients of the shifted slice are
// compared against their closed forms, plus the top-line law: the coefficient
// of v^(r-1) free of u equals r l0 x1^a Av + l1 x1^a' Au.

inline void suite_slice_coefficients(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 4, static_cast<std::uint64_t>(trial));
        const bool wide = rng.below(2) == 1;
        const Algebra alg =
            wide ? suite_even_algebra({2, 4, 4, 6}) : suite_even_algebra({2, 2, 2, 2});
        const int step = wide ? 2 : 1;  // x1 exponent per grid unit
        const int r = 2 + static_cast<int>(rng.below(3));

        Element theta = alg.zero();
        for (int i = 0; i <= r; ++i) {
            for (int j = 0; i + j <= r; ++j) {
                if (i + j == 0) continue;
                Rational c(rng.range(-10, 10));
                if (i == 0 && j == r && c == 0) c = suite_nonzero(rng, 10);
                if (c == 0) continue;
                theta += grid_monomial(alg, step * (r - i - j), i, j, c);
            }
        }
        theta += x1_power(alg, step * r, Rational(rng.range(-10, 10)));

        const PivotExpansion exp = pivot_expand(theta, 3);
        const Rational omega = suite_nonzero(rng, 10);
        const Rational D(rng.range(-10, 10));
        ConstraintSet cs;
        cs.has_scale = true;
        cs.omega = omega;
        cs.D = D;
        cs.degree_step_integral = true;
        cs.degree_step = 0;
        cs.A2 = x1_power(alg, step, omega);
        cs.A3 = x1_power(alg, step, omega * D);

        const CoefficientCheck res = slice_coefficient_check(exp, cs);
        for (const CoefficientEntry& entry : res.entries) {
            sec.record(entry.ok, [&] {
                return "trial " + std::to_string(trial) + ": " + entry.role + " slice " +
                       std::to_string(entry.slice) + " i " + std::to_string(entry.i) + " j " +
                       std::to_string(entry.j) + " closed " + to_string(entry.closed) +
                       " brute " + to_string(entry.brute);
            });
        }

        // Top-line law at position v^(r-1), u^0.
        std::vector<Element> images;
        for (std::size_t g = 0; g < alg.size(); ++g) images.push_back(alg.generator(g));
        images[1] += cs.A2;
        images[2] += cs.A3;
        const Element diff = apply_algebra_map(theta, images, alg) - theta;
        const Element brute = diff.coeff_wrt(2, r - 1).coeff_wrt(1, 0);
        const SliceTable& top = exp.slices[static_cast<std::size_t>(exp.s)];
        const Rational l0 = slice_lambda(top, 0, r);
        const Rational l1 = slice_lambda(top, 1, r - 1);
        const Element expected = Rational(r) * l0 * cs.A3 + l1 * cs.A2;
        sec.record(brute == expected, [&] {
            return "trial " + std::to_string(trial) + ": top line expected " +
                   to_string(expected) + " brute " + to_string(brute);
        });
    });
}

// --- coefficient-table-laws --------------------------------------------------
// Rows built from the first-column recurrence
//   lambda_{i+1,m-i-1} = -((m-i)/(i+1)) D lambda_{i,m-i}
// must satisfy the closed row law lambda_{sigma,m-sigma} = C(m,sigma)
// lambda_{0,m} q^sigma with q = -D, and the scale definition must invert the
// first step of the top row.

inline void suite_table_laws(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 5, static_cast<std::uint64_t>(trial));
        const int r = 1 + static_cast<int>(rng.below(5));
        const Rational l0 = suite_nonzero(rng, 9);
        const Rational D = suite_nonzero(rng, 9) / Rational(1 + static_cast<int>(rng.below(3)));
        const Rational q = -D;

        Rational top_l1 = 0;
        for (int m = r; m >= 1; --m) {
            const Rational lead = (m == r) ? l0 : Rational(rng.range(-9, 9));
            std::vector<Rational> row{lead};
            for (int i = 0; i + 1 <= m; ++i)
                row.push_back(-(Rational(m - i) / Rational(i + 1)) * D * row.back());
            if (m == r) top_l1 = row[1];
            for (int sigma = 1; sigma <= m; ++sigma) {
                const Rational closed =
                    Rational(binomial(m, sigma)) * lead * rational_pow(q, sigma);
                sec.record(row[static_cast<std::size_t>(sigma)] == closed, [&] {
                    return "trial " + std::to_string(trial) + ": row " + std::to_string(m) +
                           " position " + std::to_string(sigma) +
                           " disagrees with the closed row law";
                });
            }
        }
        sec.record(D == -(top_l1 / (Rational(r) * l0)), [&] {
            return "trial " + std::to_string(trial) +
                   ": the scale definition does not invert the top-row step";
        });
    });
}

// --- vanishing-cascade -------------------------------------------------------
// A top row whose second coefficient vanishes has zero ratio, so the
// recurrence kills every higher coefficient; structurally, a top slice that
// still carries the u-variable is rejected once the u-shift is nonzero, while
// a clean slice is accepted.

inline void suite_vanishing_cascade(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 6, static_cast<std::uint64_t>(trial));
        const int r = 1 + static_cast<int>(rng.below(5));
        const Rational l0 = suite_nonzero(rng, 9);
        const Rational D = -(Rational(0) / (Rational(r) * l0));
        std::vector<Rational> row{l0};
        for (int i = 0; i + 1 <= r; ++i)
            row.push_back(-(Rational(r - i) / Rational(i + 1)) * D * row.back());
        for (int sigma = 1; sigma <= r; ++sigma) {
            sec.record(row[static_cast<std::size_t>(sigma)] == 0, [&] {
                return "trial " + std::to_string(trial) + ": position " +
                       std::to_string(sigma) + " survives the cascade";
            });
        }

        const Algebra alg = suite_even_algebra({2, 2, 2, 2});
        Element clean = grid_monomial(alg, 0, 0, r, l0);
        if (rng.below(2)) clean += x1_power(alg, r, Rational(rng.range(-5, 5)));
        const Element shift = x1_power(alg, 1, suite_nonzero(rng, 5));
        const ConstraintSet ccs = derive_constraints_core(
            alg, pivot_expand(clean * alg.generator(3), 3), shift, alg.zero(), alg.zero());
        sec.record(ccs.route == "vanishing-coefficient" && ccs.ok, [&] {
            return "trial " + std::to_string(trial) + ": clean cascade slice rejected";
        });

        if (r >= 2) {
            int i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(r)));
            int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(r - i) + 1));
            if (i == 1 && j == r - 1) --j;  // keep the route on the vanishing branch
            const Element planted =
                clean + grid_monomial(alg, r - i - j, i, j, suite_nonzero(rng, 5));
            const ConstraintSet pcs = derive_constraints_core(
                alg, pivot_expand(planted * alg.generator(3), 3), shift, alg.zero(), alg.zero());
            sec.record(!pcs.ok, [&] {
                return "trial " + std::to_string(trial) +
                       ": u-dependent slice accepted despite the cascade";
            });
        }
    });
}

// --- pivot-regrouping --------------------------------------------------------
// Expanding the image of sum phi_j p^j under p -> p + A and regrouping by
// powers of p gives the binomial combination used throughout the cofactor
// comparisons; reconstruct it by brute force.

inline void suite_pivot_regrouping(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 7, static_cast<std::uint64_t>(trial));
        const Algebra alg = suite_even_algebra({2, 2, 2, 2});
        const int m = 1 + static_cast<int>(rng.below(4));

        std::vector<Element> phi;
        for (int j = 0; j <= m; ++j) phi.push_back(suite_poly(alg, rng, 3, 2, 3, 10));
        if (phi[static_cast<std::size_t>(m)].is_zero())
            phi[static_cast<std::size_t>(m)] = alg.generator(1);
        const Element a2 = suite_poly(alg, rng, 3, 1, 2, 5);
        const Element a3 = suite_poly(alg, rng, 3, 1, 2, 5);
        Element a4 = suite_poly(alg, rng, 3, 2, 2, 10);
        if (a4.is_zero()) a4 = alg.generator(0);

        std::vector<Element> images = {alg.generator(0), alg.generator(1) + a2,
                                       alg.generator(2) + a3, alg.generator(3) + a4};
        Element p = alg.zero();
        for (int j = 0; j <= m; ++j)
            p += phi[static_cast<std::size_t>(j)] * alg.generator(3).pow(j);
        const Element lhs = apply_algebra_map(p, images, alg) - p;

        std::vector<Element> phi_img;
        for (int j = 0; j <= m; ++j)
            phi_img.push_back(apply_algebra_map(phi[static_cast<std::size_t>(j)], images, alg));
        Element rhs =
            (phi_img[static_cast<std::size_t>(m)] - phi[static_cast<std::size_t>(m)]) *
            alg.generator(3).pow(m);
        for (int j = 1; j <= m; ++j) {
            Element coeff = phi_img[static_cast<std::size_t>(m - j)] -
                            phi[static_cast<std::size_t>(m - j)];
            Element a4_pow = alg.one();
            for (int sigma = 1; sigma <= j; ++sigma) {
                a4_pow = a4_pow * a4;
                coeff += Rational(binomial(m - j + sigma, sigma)) *
                         (phi_img[static_cast<std::size_t>(m - j + sigma)] * a4_pow);
            }
            rhs += coeff * alg.generator(3).pow(m - j);
        }
        sec.record(lhs == rhs, [&] {
            return "trial " + std::to_string(trial) +
                   ": the regrouped expansion disagrees with the direct difference";
        });
    });
}

// --- corner-coefficient ------------------------------------------------------
// Shear-invariant instances must satisfy the corner coefficient equation
// exactly; planting one extra grid term in the slice below the top makes the
// corner residual nonzero and the equation must be flagged.

inline void suite_corner_coefficient(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 8, static_cast<std::uint64_t>(trial));
        const Algebra alg = suite_even_algebra({2, 2, 2, 2});
        const int s = 1 + static_cast<int>(rng.below(3));
        const int rs = 1 + static_cast<int>(rng.below(3));
        const int total = rs + s;
        const Element u = alg.generator(1) + alg.generator(2);

        Element p = alg.zero();
        for (int k = 0; k <= s; ++k) {
            const int avail = total - k;
            const int rk = (k == s)
                               ? rs
                               : static_cast<int>(rng.below(static_cast<std::uint64_t>(avail) + 1));
            Rational c(rng.range(-10, 10));
            if (k == s && c == 0) c = suite_nonzero(rng, 10);
            if (c == 0) continue;
            p += c * (u.pow(rk) * x1_power(alg, avail - rk, 1) * alg.generator(3).pow(k));
        }

        const Rational w = suite_nonzero(rng, 5);
        const Element a2 = x1_power(alg, 1, w);
        const Element a3 = x1_power(alg, 1, -w);
        const ConstraintSet cs =
            derive_constraints_core(alg, pivot_expand(p, 3), a2, a3, alg.zero());
        sec.record(cs.route == "full-constraint" && cs.ok && cs.violations.empty(), [&] {
            std::string msg = "trial " + std::to_string(trial) + ": clean shear instance flagged";
            for (const std::string& v : cs.violations) msg += "; " + v;
            return msg;
        });

        // Plant a pure v-power in the slice below the top: its corner
        // contribution is (rs+1) c' Av, which cannot vanish.
        const Element tampered =
            p + suite_nonzero(rng, 10) *
                    (alg.generator(2).pow(rs + 1) * alg.generator(3).pow(s - 1));
        const ConstraintSet tcs =
            derive_constraints_core(alg, pivot_expand(tampered, 3), a2, a3, alg.zero());
        bool corner = false;
        for (const std::string& v : tcs.violations)
            if (v.find("corner coefficient equation fails") != std::string::npos) corner = true;
        sec.record(!tcs.ok && corner, [&] {
            return "trial " + std::to_string(trial) +
                   ": tampered corner not flagged by the corner equation";
        });
    });
}

// --- form-decomposition-round-trip -------------------------------------------
// Random rooted forms with planted cofactor and residual: the hypothesis
// shape holds for a shift pair derived from the form, and the decomposition
// recovers the planted exponent, residual, and cofactor exactly.

inline void suite_form_round_trip(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 9, static_cast<std::uint64_t>(trial));
        const bool wide = rng.below(2) == 1;
        const Algebra alg = wide ? suite_even_algebra({2, 4, 6}) : suite_even_algebra({2, 2, 2});
        const int au = wide ? 2 : 1;  // x1 exponent carrying the u-degree
        const int av = wide ? 3 : 1;  // x1 exponent carrying the v-degree
        const int wu = wide ? 4 : 2;
        const int form_deg = 2 * au + (wide ? 6 : 2);

        const int rr = 1 + static_cast<int>(rng.below(3));
        const Rational l0 = suite_nonzero(rng, 5);
        const Rational l1 = suite_nonzero(rng, 5);
        Element form = x1_power(alg, au, Rational(rr) * l0) * alg.generator(2) +
                       x1_power(alg, av, l1) * alg.generator(1);

        const int extra = 2 * static_cast<int>(rng.below(3));
        const int target = form_deg + extra;
        Element theta = alg.zero();
        for (const Exponents& mono : detail::even_monomials(alg.context(), extra, -1))
            if (rng.below(2)) theta += alg.monomial(mono, Rational(rng.range(-5, 5)));

        const bool exact_case = rng.below(5) == 0;
        Element psi = alg.zero();
        int e = 0;
        if (exact_case) {
            if (theta.is_zero()) theta = x1_power(alg, extra / 2, 1);
        } else {
            std::vector<int> valid;
            for (int cand = 0; cand <= 3; ++cand)
                if (target - 2 * cand >= 0 && (target - 2 * cand) % wu == 0) valid.push_back(cand);
            e = valid[rng.below(valid.size())];
            const int psi_deg = target - 2 * e;
            Exponents u_pure(alg.size(), 0);
            u_pure[1] = psi_deg / wu;
            psi = alg.monomial(u_pure, suite_nonzero(rng, 5));
            for (const Exponents& mono : detail::even_monomials(alg.context(), psi_deg, 2))
                if (mono[0] >= 1 && rng.below(2) == 0)
                    psi += alg.monomial(mono, Rational(rng.range(-5, 5)));
        }
        const Element phi = form * theta + x1_power(alg, e, 1) * psi;

        // Hypothesis shape: a shift pair aligned with the form's root ratio
        // fixes the form, and the image defect splits as form * B + U with U
        // free of the v-variable.
        const Rational scale = suite_nonzero(rng, 5);
        const Rational ratio = -(l1 / (Rational(rr) * l0));
        std::vector<Element> images = {alg.generator(0),
                                       alg.generator(1) + x1_power(alg, au, scale),
                                       alg.generator(2) + x1_power(alg, av, scale * ratio)};
        sec.record(apply_algebra_map(form, images, alg) == form, [&] {
            return "trial " + std::to_string(trial) + ": the shift pair moves the form";
        });
        const Element cofactor = apply_algebra_map(theta, images, alg) - theta;
        const Element residue =
            x1_power(alg, e, 1) * (apply_algebra_map(psi, images, alg) - psi);
        const Element defect = apply_algebra_map(phi, images, alg) - phi;
        sec.record(defect == form * cofactor + residue && residue.deg_in(2) <= 0, [&] {
            return "trial " + std::to_string(trial) +
                   ": the image defect does not split along the form";
        });

        const Decomposition dec = decompose_by_form(phi, form);
        if (exact_case) {
            sec.record(dec.exact_multiple && dec.B == theta, [&] {
                return "trial " + std::to_string(trial) + ": exact multiple not recovered";
            });
        } else {
            sec.record(!dec.exact_multiple && dec.e == e && dec.Q == psi && dec.B == theta,
                       [&] {
                           return "trial " + std::to_string(trial) +
                                  ": planted decomposition not recovered; e " +
                                  std::to_string(dec.e) + " expected " + std::to_string(e);
                       });
        }
    });
}

// --- pivot-reassembly ---------------------------------------------------------
// On algebras with more than four even generators the decomposition recurses
// through the highest generator; the reassembled result must agree with the
// direct single-pass route and with the planted data.

inline void suite_pivot_reassembly(SuiteSection& sec, std::uint64_t seed, int trials) {
    run_suite_trials(sec, trials, [&](int trial) {
        SplitMix64 rng = suite_rng(seed, 10, static_cast<std::uint64_t>(trial));
        const Algebra alg = suite_even_algebra({2, 2, 2, 2, 2});
        const Rational c0 = suite_nonzero(rng, 4);
        const Rational c1 = suite_nonzero(rng, 4);
        const Element form = x1_power(alg, 1, c0) * alg.generator(2) +
                             x1_power(alg, 1, c1) * alg.generator(1);
        const int target = (rng.below(4) == 0) ? 10 : 8;

        const auto b_monos = detail::even_monomials(alg.context(), target - 4, -1);
        std::vector<Exponents> with_top;
        for (const Exponents& mono : b_monos)
            if (mono[4] >= 1) with_top.push_back(mono);
        Element planted_b = alg.monomial(with_top[rng.below(with_top.size())],
                                         suite_nonzero(rng, 5));
        for (int extra = 0; extra < 3; ++extra) {
            const Exponents& mono = b_monos[rng.below(b_monos.size())];
            const long long c = rng.range(-5, 5);
            if (c != 0) planted_b += alg.monomial(mono, Rational(c));
        }

        const int e = static_cast<int>(rng.below(3));
        const auto q_monos = detail::even_monomials(alg.context(), target - 2 * e, 2);
        std::vector<Exponents> x1_clear;
        for (const Exponents& mono : q_monos)
            if (mono[0] == 0) x1_clear.push_back(mono);
        Element planted_q = alg.monomial(x1_clear[rng.below(x1_clear.size())],
                                         suite_nonzero(rng, 5));
        for (int extra = 0; extra < 2; ++extra) {
            const Exponents& mono = q_monos[rng.below(q_monos.size())];
            const long long c = rng.range(-5, 5);
            if (mono[0] >= 1 && c != 0) planted_q += alg.monomial(mono, Rational(c));
        }

        const Element p = form * planted_b + x1_power(alg, e, 1) * planted_q;
        const Decomposition rec = decompose_by_form_recursive(p, form);
        const Decomposition dir = decompose_by_form(p, form);
        sec.record(rec.exact_multiple == dir.exact_multiple && rec.B == dir.B &&
                       rec.e == dir.e && rec.Q == dir.Q,
                   [&] {
                       return "trial " + std::to_string(trial) +
                              ": recursive route disagrees with the direct route";
                   });
        sec.record(!rec.exact_multiple && rec.e == e && rec.Q == planted_q &&
                       rec.B == planted_b,
                   [&] {
                       return "trial " + std::to_string(trial) +
                              ": planted decomposition not recovered through the recursion";
                   });
    });
}

}  // namespace detail

inline IdentityReport run_identity_suite(std::uint64_t seed, int trials) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");

    std::vector<detail::SuiteSection> sections;
    const auto run = [&](const char* name, void (*fn)(detail::SuiteSection&, std::uint64_t,
                                                      int)) {
        sections.emplace_back(name);
        fn(sections.back(), seed, trials);
    };
    run("alternating-binomial-sum", detail::suite_alternating_binomial);
    run("binomial-product-identity", detail::suite_binomial_product);
    run("slice-transform-inversion", detail::suite_slice_transform);
    run("slice-coefficient-closed-forms", detail::suite_slice_coefficients);
    run("coefficient-table-laws", detail::suite_table_laws);
    run("vanishing-cascade", detail::suite_vanishing_cascade);
    run("pivot-regrouping", detail::suite_pivot_regrouping);
    run("corner-coefficient", detail::suite_corner_coefficient);
    run("form-decomposition-round-trip", detail::suite_form_round_trip);
    run("pivot-reassembly", detail::suite_pivot_reassembly);

    IdentityReport report;
    std::ostringstream out;
    out << "identity suite: seed " << seed << ", trials " << trials << "\n";
    for (const detail::SuiteSection& sec : sections) {
        out << "section " << sec.name() << ": " << sec.checks() << " checks, " << sec.failures()
            << " failures\n";
        for (const std::string& line : sec.lines()) out << line << "\n";
        report.checks += sec.checks();
        report.failures += sec.failures();
    }
    out << "total: " << report.checks << " checks, " << report.failures << " failures\n";
    report.ok = report.failures == 0;
    out << "verdict: " << (report.ok ? "all identities hold" : "identity failures detected")
        << "\n";
    report.text = out.str();
    return report;
}

}  // namespace cdga
