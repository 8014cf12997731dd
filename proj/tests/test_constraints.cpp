#include "cdga/selfeq.hpp"

#include "cdga/parse.hpp"
#include "cdga/rng.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

namespace cdga {
namespace {

Algebra quad_algebra() {
    return Algebra(make_signature({{"x1", 2}, {"x2", 2}, {"x3", 2}, {"x4", 2}}));
}

F0Model worked_model() { return build_f0({2, 4}, {"x1^2", "x2^2 + x1^2*x2"}); }

F0Model product_model() { return build_f0({2, 2}, {"x1^2", "x2^2"}); }

F0Model four_pair_model() { return build_f0({2, 2, 2, 4}, {"x1^2", "x2^2", "x3^2", "x4^2"}); }

SelfEquivalence worked_alpha(const F0Model& m) {
    const Algebra& full = m.algebra.alg;
    std::vector<Element> A = {full.zero(), parse_element("x1^2", full)};
    std::vector<Element> y = {parse_element("y1", full),
                              parse_element("y2 + (2*x2 + 2*x1^2)*y1", full)};
    return make_selfeq(m, std::move(A), std::move(y));
}

SelfEquivalence pivot_shift_alpha(const F0Model& m) {
    const Algebra& full = m.algebra.alg;
    std::vector<Element> A = {full.zero(), full.zero(), full.zero(),
                              parse_element("x1^2", full)};
    std::vector<Element> y = {parse_element("y1", full), parse_element("y2", full),
                              parse_element("y3", full),
                              parse_element("y4 + (2*x4 + x1^2)*y1", full)};
    return make_selfeq(m, std::move(A), std::move(y));
}

template <typename Fn>
std::string thrown_message(Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected std::invalid_argument";
    return {};
}

TEST(MakeSelfeq, IdentityIsValid) {
    const F0Model m = worked_model();
    const SelfEquivalence id = identity_selfeq(m);
    EXPECT_TRUE(id.shifts_all_zero());
    EXPECT_EQ(id.apply(parse_element("y2", m.algebra.alg)), parse_element("y2", m.algebra.alg));
    EXPECT_EQ(id.apply_even(m.P[1]), m.P[1]);
}

TEST(MakeSelfeq, WorkedModelShiftAccepted) {
    const F0Model m = worked_model();
    const SelfEquivalence alpha = worked_alpha(m);
    EXPECT_FALSE(alpha.shifts_all_zero());
    const Element defect = alpha.apply_even(m.P[1]) - m.P[1];
    EXPECT_EQ(defect, parse_element("2*x1^2*x2 + 2*x1^4", m.even_part));
    ASSERT_EQ(alpha.even_images.size(), 2u);
    EXPECT_EQ(alpha.even_images[1], parse_element("x2 + x1^2", m.even_part));
}

TEST(MakeSelfeq, CochainFailureReportsDefect) {
    const F0Model m = product_model();
    const Algebra& full = m.algebra.alg;
    std::vector<Element> A = {full.zero(), parse_element("x1", full)};
    std::vector<Element> y = {parse_element("y1", full), parse_element("y2", full)};
    const std::string msg = thrown_message([&] { make_selfeq(m, A, y); });
    EXPECT_NE(msg.find("cochain condition fails at y2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("2*x1*x2"), std::string::npos) << msg;
}

TEST(MakeSelfeq, OddGeneratorInShiftRejected) {
    const F0Model m = build_f0({2, 2, 6}, {"x1^2", "x2^2", "x3^2"});
    const Algebra& full = m.algebra.alg;
    std::vector<Element> A = {full.zero(), full.zero(), parse_element("y1*y2", full)};
    std::vector<Element> y = {parse_element("y1", full), parse_element("y2", full),
                              parse_element("y3", full)};
    const std::string msg = thrown_message([&] { make_selfeq(m, A, y); });
    EXPECT_NE(msg.find("shift for x3 involves an odd generator"), std::string::npos) << msg;
}

TEST(MakeSelfeq, IndecomposableShiftRejected) {
    // The cochain condition holds (y2 absorbs the rescaling), so the rejection
    // must come from the decomposability requirement on the shift itself.
    const F0Model m = product_model();
    const Algebra& full = m.algebra.alg;
    std::vector<Element> A = {full.zero(), parse_element("x2", full)};
    std::vector<Element> y = {parse_element("y1", full), parse_element("4*y2", full)};
    const std::string msg = thrown_message([&] { make_selfeq(m, A, y); });
    EXPECT_NE(msg.find("shift for x2 is not decomposable"), std::string::npos) << msg;
}

TEST(MakeSelfeq, SizeMismatchRejected) {
    const F0Model m = product_model();
    const Algebra& full = m.algebra.alg;
    EXPECT_THROW(make_selfeq(m, {full.zero()},
                             {parse_element("y1", full), parse_element("y2", full)}),
                 std::invalid_argument);
    EXPECT_THROW(make_selfeq(m, {full.zero(), full.zero()}, {parse_element("y1", full)}),
                 std::invalid_argument);
}

TEST(CofactorRows, IdentityHasZeroRows) {
    const F0Model m = worked_model();
    const std::vector<CofactorRow> rows = cofactor_decomposition(identity_selfeq(m));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].defect.is_zero());
    EXPECT_TRUE(rows[1].defect.is_zero());
    ASSERT_EQ(rows[1].cofactors.size(), 1u);
    EXPECT_TRUE(rows[1].cofactors[0].is_zero());
}

TEST(CofactorRows, WorkedModelCofactor) {
    const F0Model m = worked_model();
    const std::vector<CofactorRow> rows = cofactor_decomposition(worked_alpha(m));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].index, 2u);
    EXPECT_EQ(rows[1].defect, parse_element("2*x1^2*x2 + 2*x1^4", m.even_part));
    ASSERT_EQ(rows[1].cofactors.size(), 1u);
    EXPECT_EQ(rows[1].cofactors[0], parse_element("2*x2 + 2*x1^2", m.even_part));
    EXPECT_EQ(rows[1].cofactors[0] * m.P[0], rows[1].defect);
}

TEST(CofactorRows, FourPairPivotShiftCofactor) {
    const F0Model m = four_pair_model();
    const std::vector<CofactorRow> rows = cofactor_decomposition(pivot_shift_alpha(m));
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(rows[j].defect.is_zero());
    ASSERT_EQ(rows[3].cofactors.size(), 3u);
    EXPECT_EQ(rows[3].cofactors[0], parse_element("2*x4 + x1^2", m.even_part));
    EXPECT_TRUE(rows[3].cofactors[1].is_zero());
    EXPECT_TRUE(rows[3].cofactors[2].is_zero());
}

TEST(CofactorRows, FirstImageMustBeFixed) {
    const F0Model m = product_model();
    const std::vector<Element> images = {parse_element("x2", m.even_part),
                                         parse_element("x1", m.even_part)};
    const std::string msg = thrown_message([&] { cofactor_decomposition(m, images); });
    EXPECT_NE(msg.find("the first differential image is not fixed"), std::string::npos) << msg;
}

TEST(CofactorRows, DefectOutsidePrecedingIdeal) {
    const F0Model m = product_model();
    const std::vector<Element> images = {parse_element("x1", m.even_part),
                                         parse_element("x2 + x1", m.even_part)};
    const std::string msg = thrown_message([&] { cofactor_decomposition(m, images); });
    EXPECT_NE(msg.find("lies outside the ideal"), std::string::npos) << msg;
    EXPECT_NE(msg.find("2*x1*x2"), std::string::npos) << msg;
}

TEST(PivotExpand, WorkedModelSlices) {
    const F0Model m = worked_model();
    const PivotExpansion exp = pivot_expand(m.P[1], 1);
    EXPECT_EQ(exp.s, 2);
    ASSERT_EQ(exp.theta.size(), 3u);
    EXPECT_TRUE(exp.theta[0].is_zero());
    EXPECT_EQ(exp.theta[1], parse_element("x1^2", m.even_part));
    EXPECT_EQ(exp.theta[2], m.even_part.one());
    EXPECT_EQ(exp.axis_u, PivotExpansion::no_axis);
    EXPECT_EQ(exp.axis_v, PivotExpansion::no_axis);
    EXPECT_TRUE(exp.table_defined);
    EXPECT_EQ(exp.slices[1].rho, Rational(1));
    EXPECT_EQ(exp.slices[1].b, 2);
    EXPECT_TRUE(exp.slices[1].b_integral);
    EXPECT_EQ(exp.slices[2].b, 0);
}

TEST(PivotExpand, PurePivotPower) {
    Algebra alg = quad_algebra();
    const PivotExpansion exp = pivot_expand(parse_element("x4^2", alg), 3);
    EXPECT_EQ(exp.s, 2);
    EXPECT_TRUE(exp.theta[0].is_zero());
    EXPECT_TRUE(exp.theta[1].is_zero());
    EXPECT_EQ(exp.theta[2], alg.one());
    EXPECT_EQ(exp.axis_u, 1u);
    EXPECT_EQ(exp.axis_v, 2u);
    EXPECT_EQ(exp.slices[2].r, 0);
    EXPECT_EQ(exp.slices[2].rho, Rational(1));
}

TEST(PivotExpand, CubeGridCoefficients) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    EXPECT_EQ(exp.s, 0);
    const SliceTable& t = exp.slices[0];
    ASSERT_TRUE(t.defined);
    EXPECT_EQ(t.r, 3);
    EXPECT_EQ(slice_lambda(t, 0, 3), Rational(1));
    EXPECT_EQ(slice_lambda(t, 1, 2), Rational(3));
    EXPECT_EQ(slice_lambda(t, 2, 1), Rational(3));
    EXPECT_EQ(slice_lambda(t, 3, 0), Rational(1));
    EXPECT_EQ(slice_lambda(t, 0, 1), Rational(0));
    EXPECT_EQ(t.a_exp.at({0, 1}), 2);
    EXPECT_EQ(t.a_exp.at({1, 2}), 0);
    EXPECT_TRUE(t.absent.empty());
    EXPECT_EQ(t.rho, Rational(0));
}

TEST(PivotExpand, AbsentGridSlots) {
    Algebra alg(make_signature({{"x1", 4}, {"x2", 6}, {"x3", 6}, {"x4", 6}}));
    const PivotExpansion exp = pivot_expand(parse_element("x2*x3", alg), 3);
    const SliceTable& t = exp.slices[0];
    ASSERT_TRUE(t.defined);
    EXPECT_EQ(t.r, 2);
    EXPECT_EQ(slice_lambda(t, 1, 1), Rational(1));
    const std::vector<std::pair<int, int>> expected_absent = {{0, 1}, {1, 0}};
    EXPECT_EQ(t.absent, expected_absent);
    EXPECT_EQ(t.a_exp.at({1, 1}), 0);
    EXPECT_EQ(t.a_exp.at({0, 2}), 0);
    EXPECT_EQ(t.a_exp.at({2, 0}), 0);
}

TEST(PivotExpand, ContractViolations) {
    Algebra alg = quad_algebra();
    EXPECT_THROW(pivot_expand(Element{}, 3), std::invalid_argument);
    EXPECT_THROW(pivot_expand(alg.zero(), 3), std::invalid_argument);
    EXPECT_THROW(pivot_expand(parse_element("x4^2 + x1", alg), 3), std::invalid_argument);
    EXPECT_THROW(pivot_expand(parse_element("x4^2", alg), 0), std::invalid_argument);
    EXPECT_THROW(pivot_expand(parse_element("x4^2", alg), 9), std::invalid_argument);
    const F0Model m = four_pair_model();
    EXPECT_THROW(pivot_expand(parse_element("x1^2", m.algebra.alg), 4), std::invalid_argument);
    EXPECT_THROW(pivot_expand(parse_element("y1*y2", m.algebra.alg), 3), std::invalid_argument);
}

TEST(SliceTransform, FourPairTopSliceFixed) {
    const F0Model m = four_pair_model();
    const SelfEquivalence alpha = pivot_shift_alpha(m);
    const PivotExpansion exp = pivot_expand(m.P[0], 3);
    const std::vector<bool> flags = check_slice_transform(alpha, exp);
    ASSERT_EQ(flags.size(), 1u);
    EXPECT_TRUE(flags[0]);
}

TEST(SliceTransform, ShearDegreeOne) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(2*x2 - x3)*x4 - 6*x2^2 + 3*x2*x3", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    EXPECT_EQ(exp.s, 1);
    const std::vector<Element> images = {
        parse_element("x1", alg), parse_element("x2 + x1", alg),
        parse_element("x3 + 2*x1", alg), parse_element("x4 + 3*x1", alg)};
    const std::vector<bool> flags = check_slice_transform(alg, exp, images);
    ASSERT_EQ(flags.size(), 2u);
    EXPECT_TRUE(flags[0]);
    EXPECT_TRUE(flags[1]);
}

TEST(SliceTransform, ShearDegreeTwo) {
    Algebra alg = quad_algebra();
    const Element g = parse_element("2*x2 - x3", alg);
    const Element x2 = parse_element("x2", alg);
    const Element x4 = parse_element("x4", alg);
    const Element th2 = g;
    const Element th1 = Rational(-6) * (x2 * g) + g * g;
    const Element th0 = Rational(9) * (x2 * x2 * g) - Rational(3) * (x2 * (g * g));
    const Element p = th2 * x4 * x4 + th1 * x4 + th0;
    const PivotExpansion exp = pivot_expand(p, 3);
    EXPECT_EQ(exp.s, 2);
    const std::vector<Element> images = {
        parse_element("x1", alg), parse_element("x2 + x1", alg),
        parse_element("x3 + 2*x1", alg), parse_element("x4 + 3*x1", alg)};
    const std::vector<bool> flags = check_slice_transform(alg, exp, images);
    ASSERT_EQ(flags.size(), 3u);
    EXPECT_TRUE(flags[0]);
    EXPECT_TRUE(flags[1]);
    EXPECT_TRUE(flags[2]);
}

TEST(SliceTransform, UnfixedMapRejected) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(2*x2 - x3)*x4 - 6*x2^2 + 3*x2*x3", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    const std::vector<Element> bad = {parse_element("x1", alg), parse_element("x2 + x1", alg),
                                      parse_element("x3", alg), parse_element("x4", alg)};
    const std::string msg = thrown_message([&] { check_slice_transform(alg, exp, bad); });
    EXPECT_NE(msg.find("does not fix the expanded polynomial"), std::string::npos) << msg;
    EXPECT_THROW(check_slice_transform(alg, exp, {parse_element("x1", alg)}),
                 std::invalid_argument);
}

// The hand-checked full-constraint instance: P = (x3 + x2)*x4 + x3^2 - x2^2
// + 5*x1^2 is fixed by x2 -> x2 + x1, x3 -> x3 - x1, x4 -> x4 + 2*x1.
TEST(DeriveConstraints, FullConstraintInstance) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(x3 + x2)*x4 + x3^2 - x2^2 + 5*x1^2", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    const ConstraintSet cs = derive_constraints_core(
        alg, exp, parse_element("x1", alg), parse_element("-x1", alg),
        parse_element("2*x1", alg));
    EXPECT_EQ(cs.route, "full-constraint");
    EXPECT_TRUE(cs.ok) << (cs.violations.empty() ? "" : cs.violations.front());
    EXPECT_TRUE(cs.violations.empty());
    EXPECT_TRUE(cs.has_scale);
    EXPECT_EQ(cs.omega, Rational(1));
    EXPECT_EQ(cs.D, Rational(-1));
    EXPECT_EQ(cs.form, parse_element("x1*x3 + x1*x2", alg));
    EXPECT_FALSE(cs.trivial);
    EXPECT_TRUE(cs.degree_step_integral);
    EXPECT_EQ(cs.degree_step, 0);
}

// Top slice (x2 + x3)^2: lambda_{0,2} = 1 and lambda_{1,1} = 2 give the root
// ratio D = -1, and the binomial row law pins lambda_{2,0} = 1.
TEST(DeriveConstraints, RowLawArithmetic) {
    Algebra alg = quad_algebra();
    const Element good = parse_element(
        "(x2^2 + 2*x2*x3 + x3^2)*x4 + x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", alg);
    const PivotExpansion exp = pivot_expand(good, 3);
    const ConstraintSet cs = derive_constraints_core(
        alg, exp, parse_element("3*x1", alg), parse_element("-3*x1", alg), alg.zero());
    EXPECT_EQ(cs.route, "full-constraint");
    EXPECT_TRUE(cs.ok) << (cs.violations.empty() ? "" : cs.violations.front());
    EXPECT_EQ(cs.D, Rational(-1));
    EXPECT_EQ(cs.omega, Rational(3));

    const Element tampered = parse_element(
        "(2*x2^2 + 2*x2*x3 + x3^2)*x4 + x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", alg);
    const PivotExpansion texp = pivot_expand(tampered, 3);
    const ConstraintSet tcs = derive_constraints_core(
        alg, texp, parse_element("3*x1", alg), parse_element("-3*x1", alg), alg.zero());
    EXPECT_FALSE(tcs.ok);
    bool found = false;
    for (const std::string& v : tcs.violations)
        if (v == "top-row coefficient law fails at position 2") found = true;
    EXPECT_TRUE(found);
}

TEST(DeriveConstraints, TamperedAxisShiftFlagged) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(x3 + x2)*x4 + x3^2 - x2^2 + 5*x1^2", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    const ConstraintSet cs = derive_constraints_core(
        alg, exp, parse_element("x1", alg), parse_element("x1", alg),
        parse_element("2*x1", alg));
    EXPECT_FALSE(cs.ok);
    bool derived = false;
    bool unfixed = false;
    for (const std::string& v : cs.violations) {
        if (v == "the x3-role shift disagrees with its derived value") derived = true;
        if (v == "the map does not fix the first differential image") unfixed = true;
    }
    EXPECT_TRUE(derived);
    EXPECT_TRUE(unfixed);
}

TEST(DeriveConstraints, VanishingCoefficientForcesShifts) {
    Algebra alg = quad_algebra();
    // lambda_0 != 0, lambda_1 = 0, top slice free of x2: the x3-role shift is
    // forced, and the x2-role shift is forced because P depends on x2.
    const Element free_top = parse_element("x3^2*x4 + x2^3", alg);
    const PivotExpansion fexp = pivot_expand(free_top, 3);
    const ConstraintSet fcs = derive_constraints_core(
        alg, fexp, alg.zero(), parse_element("x1", alg), alg.zero());
    EXPECT_EQ(fcs.route, "vanishing-coefficient");
    ASSERT_TRUE(fcs.top_slice_x2_free.has_value());
    EXPECT_TRUE(*fcs.top_slice_x2_free);
    EXPECT_FALSE(fcs.ok);
    bool forced = false;
    for (const std::string& v : fcs.violations)
        if (v == "the x3-role shift must vanish on the vanishing-coefficient route") forced = true;
    EXPECT_TRUE(forced);

    // x2-dependent top slice with a nonzero x2-role shift: the cascade line
    // fires alongside the forced-vanishing line.
    const Element dep_top = parse_element("(x3^2 + x2^2)*x4 + x2^3", alg);
    const PivotExpansion dexp = pivot_expand(dep_top, 3);
    const ConstraintSet dcs = derive_constraints_core(
        alg, dexp, parse_element("x1", alg), alg.zero(), alg.zero());
    EXPECT_EQ(dcs.route, "vanishing-coefficient");
    ASSERT_TRUE(dcs.top_slice_x2_free.has_value());
    EXPECT_FALSE(*dcs.top_slice_x2_free);
    EXPECT_FALSE(dcs.ok);
    bool cascade = false;
    bool x2_forced = false;
    for (const std::string& v : dcs.violations) {
        if (v == "the top slice depends on the x2-role variable despite the vanishing cascade")
            cascade = true;
        if (v == "the x2-role shift must vanish on the vanishing-coefficient route")
            x2_forced = true;
    }
    EXPECT_TRUE(cascade);
    EXPECT_TRUE(x2_forced);
}

TEST(DeriveConstraints, IdentityOnCascadeModelIsClean) {
    // The cascade conclusion is derived under a nonzero x2-role shift; the
    // identity map on an x2-dependent model must pass with a trivial verdict.
    Algebra alg = quad_algebra();
    const Element p = parse_element("(x3^2 + x2^2)*x4 + x2^3", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    const ConstraintSet cs =
        derive_constraints_core(alg, exp, alg.zero(), alg.zero(), alg.zero());
    EXPECT_EQ(cs.route, "vanishing-coefficient");
    EXPECT_TRUE(cs.ok) << (cs.violations.empty() ? "" : cs.violations.front());
    EXPECT_TRUE(cs.trivial);
    ASSERT_TRUE(cs.top_slice_x2_free.has_value());
    EXPECT_FALSE(*cs.top_slice_x2_free);
}

TEST(DeriveConstraints, VanishingShiftRoute) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(x3 + x2)*x4 + x3^2 - x2^2 + 5*x1^2", alg);
    const PivotExpansion exp = pivot_expand(p, 3);

    const ConstraintSet id_cs =
        derive_constraints_core(alg, exp, alg.zero(), alg.zero(), alg.zero());
    EXPECT_EQ(id_cs.route, "vanishing-shift");
    EXPECT_TRUE(id_cs.ok);
    EXPECT_TRUE(id_cs.trivial);

    const ConstraintSet bad_cs = derive_constraints_core(
        alg, exp, alg.zero(), parse_element("x1", alg), alg.zero());
    EXPECT_EQ(bad_cs.route, "vanishing-shift");
    EXPECT_FALSE(bad_cs.ok);
    bool forced = false;
    for (const std::string& v : bad_cs.violations)
        if (v == "the x3-role shift must vanish when the x2-role shift does") forced = true;
    EXPECT_TRUE(forced);
}

TEST(DeriveConstraints, DegenerateRouteOnFourPairModel) {
    const F0Model m = four_pair_model();
    const SelfEquivalence alpha = pivot_shift_alpha(m);
    const PivotExpansion exp = pivot_expand(m.P[0], 3);
    const ConstraintSet cs = derive_constraints(alpha, exp);
    EXPECT_EQ(cs.route, "degenerate-top-slice");
    EXPECT_TRUE(cs.ok);
    EXPECT_FALSE(cs.trivial);
    EXPECT_FALSE(cs.homotopy.has_value());
}

TEST(DeriveConstraints, TrivialVerdictCarriesCertificate) {
    const F0Model m = build_f0({2, 2, 2, 2}, {"x1^2 + x2^2", "x2^2", "x3^2", "x4^2"});
    const SelfEquivalence id = identity_selfeq(m);
    const PivotExpansion exp = pivot_expand(m.P[0], 3);
    const ConstraintSet cs = derive_constraints(id, exp);
    EXPECT_EQ(cs.route, "vanishing-coefficient");
    EXPECT_TRUE(cs.ok);
    EXPECT_TRUE(cs.trivial);
    EXPECT_FALSE(cs.top_slice_x2_free.has_value());
    ASSERT_TRUE(cs.homotopy.has_value());
    EXPECT_TRUE(cs.homotopy->certified);
    EXPECT_EQ(cs.homotopy->verdict, "homotopic to identity");
}

TEST(DeriveConstraints, StructuralGuards) {
    const F0Model two = worked_model();
    const SelfEquivalence alpha2 = worked_alpha(two);
    const PivotExpansion exp2 = pivot_expand(two.P[0], 1);
    EXPECT_THROW(derive_constraints(alpha2, exp2), std::invalid_argument);

    const F0Model four = four_pair_model();
    const SelfEquivalence alpha4 = pivot_shift_alpha(four);
    EXPECT_THROW(derive_constraints(alpha4, pivot_expand(four.P[1], 3)),
                 std::invalid_argument);
    EXPECT_THROW(derive_constraints(alpha4, pivot_expand(four.P[0], 2)),
                 std::invalid_argument);
}

TEST(DeriveConstraints, RouteInvariantUnderScaling) {
    Algebra alg = quad_algebra();
    const std::vector<Element> bases = {
        parse_element("(x3 + x2)*x4 + x3^2 - x2^2 + 5*x1^2", alg),
        parse_element("(x3^2 + x2^2)*x4 + x2^3", alg),
        parse_element("x1^2*x4 + x1^3", alg)};
    const std::vector<Element> shifts = {alg.zero(), parse_element("x1", alg)};
    for (int trial = 0; trial < 24; ++trial) {
        SplitMix64 rng = trial_rng(911, trial);
        const Element& base = bases[rng.below(bases.size())];
        Rational c(rng.range(-3, 3));
        if (c == 0) c = 2;
        const Element a2 = shifts[rng.below(2)];
        const Element a3 = shifts[rng.below(2)];
        const Element a4 = shifts[rng.below(2)];
        const std::string route = constraint_route(pivot_expand(base, 3), a2, a3, a4);
        const std::string scaled = constraint_route(pivot_expand(c * base, 3), a2, a3, a4);
        EXPECT_EQ(route, scaled);
    }
}

TEST(SliceCoefficient, CaseTwoExactValues) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(x3 + x2)*x4 + x3^2 - x2^2 + 5*x1^2", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    const ConstraintSet cs = derive_constraints_core(
        alg, exp, parse_element("x1", alg), parse_element("-x1", alg),
        parse_element("2*x1", alg));
    ASSERT_TRUE(cs.has_scale);
    const CoefficientCheck res = slice_coefficient_check(exp, cs);
    EXPECT_TRUE(res.ok);
    bool found = false;
    for (const CoefficientEntry& e : res.entries) {
        EXPECT_TRUE(e.ok) << e.role << " slice " << e.slice << " i " << e.i << " j " << e.j;
        if (e.role == "x3-axis" && e.slice == 0 && e.i == 1) {
            found = true;
            EXPECT_EQ(e.closed, parse_element("-2*x1", alg));
            EXPECT_EQ(e.brute, e.closed);
        }
    }
    EXPECT_TRUE(found);
}

TEST(SliceCoefficient, RandomTablesMatchClosedForms) {
    Algebra alg = quad_algebra();
    for (int trial = 0; trial < 30; ++trial) {
        SplitMix64 rng = trial_rng(5151, trial);
        const int r = 2 + static_cast<int>(rng.below(3));
        Element theta = alg.zero();
        for (int i = 0; i + 0 <= r; ++i) {
            for (int j = 0; i + j <= r; ++j) {
                if (i + j == 0) continue;
                Rational c(rng.range(-3, 3));
                if (i == 0 && j == r && c == 0) c = 1 + static_cast<int>(rng.below(3));
                if (c == 0) continue;
                Exponents m(alg.size(), 0);
                m[0] = r - i - j;
                m[1] = i;
                m[2] = j;
                theta += alg.monomial(m, c);
            }
        }
        {
            Exponents m(alg.size(), 0);
            m[0] = r;
            theta += alg.monomial(m, Rational(rng.range(-2, 2)));
        }
        const PivotExpansion exp = pivot_expand(theta, 3);
        ASSERT_EQ(exp.s, 0);

        Rational omega(1 + static_cast<int>(rng.below(4)));
        if (rng.below(2)) omega = -omega;
        const Rational D(rng.range(-3, 3));
        ConstraintSet cs;
        cs.has_scale = true;
        cs.omega = omega;
        cs.D = D;
        cs.degree_step_integral = true;
        cs.degree_step = 0;
        Exponents e1(alg.size(), 0);
        e1[0] = 1;
        cs.A2 = alg.monomial(e1, omega);
        cs.A3 = alg.monomial(e1, omega * D);

        const CoefficientCheck res = slice_coefficient_check(exp, cs);
        EXPECT_TRUE(res.ok) << "trial " << trial;
    }
}

TEST(SliceCoefficient, VanishingCornerRejected) {
    Algebra alg = quad_algebra();
    const PivotExpansion exp = pivot_expand(parse_element("x2*x3*x4", alg), 3);
    ConstraintSet cs;
    cs.has_scale = true;
    const std::string msg = thrown_message([&] { slice_coefficient_check(exp, cs); });
    EXPECT_NE(msg.find("the top corner coefficient vanishes"), std::string::npos) << msg;
}

TEST(SliceCoefficient, MissingScaleRejected) {
    Algebra alg = quad_algebra();
    const Element p = parse_element("(x3 + x2)*x4 + x3^2 - x2^2 + 5*x1^2", alg);
    const PivotExpansion exp = pivot_expand(p, 3);
    const ConstraintSet cs;
    const std::string msg = thrown_message([&] { slice_coefficient_check(exp, cs); });
    EXPECT_NE(msg.find("does not define the scale pair"), std::string::npos) << msg;
}

TEST(Triviality, IdentityCertified) {
    const F0Model m = worked_model();
    const TrivialityResult res = triviality_check(identity_selfeq(m));
    EXPECT_TRUE(res.certified);
    EXPECT_EQ(res.verdict, "homotopic to identity");
    EXPECT_TRUE(res.steps.empty());
}

TEST(Triviality, OddPerturbationAbsorbed) {
    const F0Model m = build_f0({2, 2, 2}, {"x1^2", "x2^2", "x3^4"});
    const Algebra& full = m.algebra.alg;
    std::vector<Element> A(3, full.zero());
    std::vector<Element> y = {parse_element("y1", full), parse_element("y2", full),
                              parse_element("y3 + x2^2*y1 - x1^2*y2", full)};
    const SelfEquivalence alpha = make_selfeq(m, std::move(A), std::move(y));
    const TrivialityResult res = triviality_check(alpha);
    EXPECT_TRUE(res.certified);
    EXPECT_EQ(res.verdict, "homotopic to identity");
    ASSERT_EQ(res.steps.size(), 1u);
    EXPECT_EQ(res.steps[0].generator, "y3");
    EXPECT_EQ(res.steps[0].perturbation,
              parse_element("x2^2*y1 - x1^2*y2", full));
    EXPECT_EQ(apply_differential(m.algebra, res.steps[0].primitive),
              -res.steps[0].perturbation);
}

TEST(Triviality, ShiftedEvenGeneratorInconclusive) {
    const F0Model m = worked_model();
    const TrivialityResult res = triviality_check(worked_alpha(m));
    EXPECT_FALSE(res.certified);
    EXPECT_EQ(res.verdict, "inconclusive: an even generator is shifted");
    EXPECT_TRUE(res.steps.empty());
}

}  // namespace
}  // namespace cdga
