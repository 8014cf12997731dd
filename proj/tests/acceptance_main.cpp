// Acceptance gate: runs the release criteria end to end and prints one
// pass/fail line per criterion.  Expected values and time limits are pinned
// in the criterion bodies; the process exits 0 only when every criterion
// passes.  CDGA_CLI_PATH and CDGA_MODELS_DIR are injected by the build.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdga/decompose.hpp"
#include "cdga/dga.hpp"
#include "cdga/f0_model.hpp"
#include "cdga/ideal.hpp"
#include "cdga/parse.hpp"
#include "cdga/rng.hpp"
#include "cdga/selfeq.hpp"
#include "cdga/verify.hpp"

using namespace cdga;

namespace {

// Collects requirement failures; the first failure message is reported.
struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) detail = what;
        pass = false;
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string command = std::string(CDGA_CLI_PATH) + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return result;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), got);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

// Parses "section <name>: <checks> checks, <failures> failures" from a suite
// report.
std::optional<std::pair<long long, long long>> section_stats(const std::string& text,
                                                             const std::string& name) {
    const std::string key = "section " + name + ": ";
    const std::size_t pos = text.find(key);
    if (pos == std::string::npos) return std::nullopt;
    long long checks = 0;
    long long failures = 0;
    if (std::sscanf(text.c_str() + pos + key.size(), "%lld checks, %lld failures", &checks,
                    &failures) != 2)
        return std::nullopt;
    return std::make_pair(checks, failures);
}

void require_clean_section(Check& c, const IdentityReport& suite, const std::string& name,
                           long long min_checks) {
    const auto stats = section_stats(suite.text, name);
    c.require(stats.has_value(), "section " + name + " missing from the suite report");
    if (!stats) return;
    c.require(stats->first >= min_checks,
              "section " + name + " ran only " + std::to_string(stats->first) + " checks");
    c.require(stats->second == 0,
              "section " + name + " reports " + std::to_string(stats->second) + " failures");
}

// Random model of F0 shape, as exercised by the cylinder property tests.
CochainAlgebra random_model(SplitMix64& rng) {
    const int n = 1 + static_cast<int>(rng.below(3));
    std::vector<std::pair<std::string, int>> gens;
    for (int i = 0; i < n; ++i)
        gens.push_back({"x" + std::to_string(i + 1), 2 * (1 + static_cast<int>(rng.below(2)))});
    std::vector<int> p_degrees;
    for (int i = 0; i < n; ++i) {
        const int d = 4 + 2 * static_cast<int>(rng.below(3));
        p_degrees.push_back(d);
        gens.push_back({"y" + std::to_string(i + 1), d - 1});
    }
    Algebra alg(make_signature(gens));
    std::vector<Element> diff(2 * static_cast<std::size_t>(n), alg.zero());
    for (int i = 0; i < n; ++i) {
        Element p = alg.zero();
        for (const Exponents& m : alg.monomial_basis(p_degrees[static_cast<std::size_t>(i)])) {
            bool even_only = true;
            for (int j = 0; j < n; ++j)
                if (m[static_cast<std::size_t>(n + j)] != 0) even_only = false;
            if (even_only) p += alg.monomial(m, Rational(rng.range(-2, 2)));
        }
        diff[static_cast<std::size_t>(n + i)] = p;
    }
    return make_cochain_algebra(alg, diff);
}

// Criterion 1: cohomology of the two reference models vanishes in odd degrees
// and matches the Hilbert-series coefficients in even degrees, within 5 s per
// model.
void criterion_1(Check& c) {
    const struct {
        std::vector<int> degrees;
        std::vector<std::string> P;
    } cases[] = {
        {{2, 2}, {"x1^2", "x2^2"}},
        {{2, 4}, {"x1^2", "x2^2 + x1^2*x2"}},
    };
    for (const auto& cs : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const F0Model model = build_f0(cs.degrees, cs.P);
        int top = 0;
        for (std::size_t i = 0; i < model.P.size(); ++i)
            top += static_cast<int>(*model.P[i].cohomological_degree()) - cs.degrees[i];
        const F0CohomologyReport report = verify_f0_cohomology(model, top);
        c.require(report.ok, "cohomology mismatch: " + report.detail);
        c.require(report.total_checked, "total dimension was not cross-checked");
        c.require(seconds_since(t0) < 5.0, "model exceeded the 5 s budget");
    }
}

// Criterion 2: pure-power sequences certify regular; [x1*x2, x1*x3] certifies
// not-regular with a doubly verified witness, within 1 s.
void criterion_2(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();

    {
        Algebra one_var(make_signature({{"x1", 2}}));
        c.require(is_regular_sequence({parse_element("x1^3", one_var)}).regular,
                  "x1^3 alone must be regular");
    }
    {
        Algebra five(make_signature(
            {{"x1", 2}, {"x2", 2}, {"x3", 2}, {"x4", 2}, {"x5", 2}}));
        const std::vector<Element> seq = {
            parse_element("x1^2", five), parse_element("x2^3", five),
            parse_element("x3^2", five), parse_element("x4^4", five),
            parse_element("x5^2", five)};
        const RegularityCertificate cert = is_regular_sequence(seq);
        c.require(cert.regular, "pure powers in five variables must be regular");
    }
    {
        Algebra three(make_signature({{"x1", 2}, {"x2", 2}, {"x3", 2}}));
        const Element p1 = parse_element("x1*x2", three);
        const Element p2 = parse_element("x1*x3", three);
        const RegularityCertificate cert = is_regular_sequence({p1, p2});
        c.require(!cert.regular, "[x1*x2, x1*x3] must fail regularity");
        c.require(cert.witness_index == 2, "the failure must occur at the second element");
        c.require(cert.witness_verified, "the witness must pass the double verification");
        c.require(verify_witness({p1}, p2, cert.witness, three.context_ptr()),
                  "independent witness re-verification failed");
    }

    c.require(seconds_since(t0) < 1.0, "regularity checks exceeded the 1 s budget");
}

// Criterion 3: the frozen triple passes all four decomposition hypotheses and
// is certified not-regular end to end, within 10 s.
void criterion_3(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Algebra alg(make_signature({{"x1", 2}, {"x2", 2}, {"x3", 2}, {"x4", 2}}));
    const Element p1 = parse_element("(x3 - x2)*x3 + x1^2*x2", alg);
    const Element p2 = parse_element("(x3 - x2)*x2 + x1^2*x4", alg);
    const Element p3 = parse_element("(x3 - x2)*x4 + x1^2*x1", alg);
    const Element form = parse_element("x3 - x2", alg);
    const TripleCertificate cert = certify_nonregular_triple(p1, p2, p3, form, 1, {2, 2, 2});
    c.require(cert.hypotheses_pass, "a hypothesis check failed on the frozen triple");
    c.require(cert.regularity_checked && !cert.regularity.regular,
              "the triple was not certified not-regular");
    c.require(cert.regularity.witness_verified, "the witness failed double verification");
    c.require(cert.certified, "the end-to-end certificate did not close");
    const std::string report = render_report(cert);
    c.require(report.find("verdict: not-regular") != std::string::npos,
              "report lacks the not-regular verdict");
    c.require(report.find("certified: yes") != std::string::npos,
              "report lacks the certified stamp");
    c.require(seconds_since(t0) < 10.0, "the pipeline exceeded the 10 s budget");
}

// Criterion 4: the primitive-built homotopy certificate passes, and a
// single-entry perturbation fails at the barred generator, within 1 s.
void criterion_4(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Algebra alg(make_signature(
        {{"x1", 2}, {"x2", 2}, {"x3", 2}, {"y1", 3}, {"y2", 3}, {"y3", 7}}));
    const CochainAlgebra m = make_cochain_algebra(
        alg, {alg.zero(), alg.zero(), alg.zero(), parse_element("x1^2", alg),
              parse_element("x2^2", alg), parse_element("x3^4", alg)});
    const CylinderAlgebra cyl = build_cylinder(m);
    const Morphism id = identity_morphism(m);

    const Element u = parse_element("y1*y2", alg);
    const Element z = apply_differential(m, u);
    const std::size_t y3 = alg.signature().index_of("y3");
    std::vector<Element> images = id.images;
    images[y3] = alg.generator("y3") + z;
    const Morphism alpha_prime = make_morphism(m, m, images);

    const HomotopyCertificate cert = homotopy_from_primitive(cyl, id, alpha_prime, y3, u);
    c.require(check_homotopy(cyl, cert.f_images, id, alpha_prime).ok,
              "the primitive certificate failed verification");

    std::vector<Element> bad = cert.f_images;
    bad[CylinderAlgebra::bar_slot(y3)] += parse_element("y1*y2", alg);
    const HomotopyCheck broken = check_homotopy(cyl, bad, id, alpha_prime);
    c.require(!broken.ok, "the perturbed certificate must fail");
    c.require(broken.condition == "D-compatibility",
              "unexpected failure condition: " + broken.condition);
    c.require(broken.generator == "y3bar", "unexpected failure locus: " + broken.generator);
    c.require(seconds_since(t0) < 1.0, "the homotopy checks exceeded the 1 s budget");
}

// Criterion 5: the closed form of the cylinder inclusion twist on the sphere
// model, and bounded termination on 200 random models.
void criterion_5(Check& c) {
    Algebra alg(make_signature({{"x", 2}, {"y", 3}}));
    const CochainAlgebra s2 =
        make_cochain_algebra(alg, {alg.zero(), parse_element("x^2", alg)});
    const CylinderAlgebra cyl = build_cylinder(s2);
    const Algebra& ext = cyl.extended;
    const Element expected = ext.generator("y") + ext.generator("yhat") +
                             Rational(2) * (ext.generator("x") * ext.generator("xbar")) +
                             ext.generator("xbar") * ext.generator("xhat");
    c.require(e_theta(cyl, 1) == expected, "the sphere twist differs from the hand oracle");

    SplitMix64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        const CochainAlgebra model = random_model(rng);
        const CylinderAlgebra rc = build_cylinder(model);
        for (std::size_t i = 0; i < model.signature().size(); ++i) {
            try {
                e_theta(rc, i);
            } catch (const std::exception& e) {
                c.require(false, std::string("twist iteration bound violated: ") + e.what());
                return;
            }
        }
    }
}

// Criterion 6: the inversion identity and the closed-form slice coefficients,
// 100 seeded instances each with zero failures.
void criterion_6(Check& c, const IdentityReport& suite) {
    require_clean_section(c, suite, "slice-transform-inversion", 100);
    require_clean_section(c, suite, "slice-coefficient-closed-forms", 100);
}

// Criterion 7: coefficient-table laws on 100 random tables, plus the
// vanishing cascade, with zero failures.
void criterion_7(Check& c, const IdentityReport& suite) {
    require_clean_section(c, suite, "coefficient-table-laws", 100);
    require_clean_section(c, suite, "vanishing-cascade", 100);
}

// Criterion 8: the worked decomposition instance, its ring re-verification,
// and the random round-trips.
void criterion_8(Check& c, const IdentityReport& suite) {
    Algebra alg(make_signature({{"x1", 2}, {"x2", 2}, {"x3", 2}, {"x4", 2}}));
    const Element p = parse_element("x3^2 - x2^2 + x1^2", alg);
    const Element form = parse_element("x3 - x2", alg);
    const Decomposition dec = decompose_by_form(p, form);
    c.require(!dec.exact_multiple, "the worked instance is not an exact multiple");
    c.require(dec.B == parse_element("x3 + x2", alg),
              "cofactor differs from x3 + x2: " + to_string(dec.B));
    c.require(dec.e == 2, "exponent differs from 2: " + std::to_string(dec.e));
    c.require(dec.Q == alg.one(), "residual differs from 1: " + to_string(dec.Q));
    const Element rebuilt =
        form * dec.B + parse_element("x1^2", alg) * dec.Q;
    c.require(rebuilt == p, "ring re-verification failed");

    require_clean_section(c, suite, "form-decomposition-round-trip", 150);
    require_clean_section(c, suite, "pivot-reassembly", 100);
}

// Criterion 9: on the [x1^2, x2^2] model, every candidate self-map with both
// even generators fixed and odd images drawn from the degree-3 coefficient
// grid is either rejected as a cochain map or certified homotopic to the
// identity, within 2 s.
void criterion_9(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const F0Model model = build_f0({2, 2}, {"x1^2", "x2^2"});
    const Algebra& alg = model.algebra.alg;
    const Element y1 = alg.generator(2);
    const Element y2 = alg.generator(3);

    int valid = 0;
    int certified = 0;
    for (int a1 = -2; a1 <= 2; ++a1)
        for (int b1 = -2; b1 <= 2; ++b1)
            for (int a2 = -2; a2 <= 2; ++a2)
                for (int b2 = -2; b2 <= 2; ++b2) {
                    const Element img1 = y1 + Rational(a1) * y1 + Rational(b1) * y2;
                    const Element img2 = y2 + Rational(a2) * y1 + Rational(b2) * y2;
                    const Morphism m = make_morphism(
                        model.algebra, model.algebra,
                        {alg.generator(0), alg.generator(1), img1, img2});
                    if (!is_cochain_map(m).ok) continue;
                    ++valid;
                    const SelfEquivalence alpha = make_selfeq(
                        model, {alg.zero(), alg.zero()}, {img1, img2});
                    const TrivialityResult triv = triviality_check(alpha);
                    if (!triv.certified) continue;
                    bool steps_ok = true;
                    const CylinderAlgebra cyl = build_cylinder(model.algebra);
                    for (const TrivialityStep& step : triv.steps)
                        if (!check_homotopy(cyl, step.certificate.f_images,
                                            step.certificate.alpha,
                                            step.certificate.alpha_prime)
                                 .ok)
                            steps_ok = false;
                    if (steps_ok) ++certified;
                }
    c.require(valid >= 1, "the identity candidate must be valid");
    c.require(valid == certified,
              std::to_string(valid - certified) + " valid candidates were not certified");
    c.require(seconds_since(t0) < 2.0, "the enumeration exceeded the 2 s budget");
}

// Criterion 10: the identity-suite report is byte-identical across two CLI
// invocations with the same seed and trial count.
void criterion_10(Check& c) {
    const RunResult first = run_cli("verify-lemmas --seed 1 --trials 100");
    const RunResult second = run_cli("verify-lemmas --seed 1 --trials 100");
    c.require(first.exit_code == 0, "first run exited " + std::to_string(first.exit_code));
    c.require(second.exit_code == 0, "second run exited " + std::to_string(second.exit_code));
    c.require(first.output == second.output, "the two reports differ");
    c.require(first.output.find("verdict: all identities hold") != std::string::npos,
              "the report lacks the clean verdict");
}

}  // namespace

int main() {
    const IdentityReport suite = run_identity_suite(1, 100);

    const std::vector<std::pair<int, std::function<void(Check&)>>> criteria = {
        {1, [](Check& c) { criterion_1(c); }},
        {2, [](Check& c) { criterion_2(c); }},
        {3, [](Check& c) { criterion_3(c); }},
        {4, [](Check& c) { criterion_4(c); }},
        {5, [](Check& c) { criterion_5(c); }},
        {6, [&suite](Check& c) { criterion_6(c, suite); }},
        {7, [&suite](Check& c) { criterion_7(c, suite); }},
        {8, [&suite](Check& c) { criterion_8(c, suite); }},
        {9, [](Check& c) { criterion_9(c); }},
        {10, [](Check& c) { criterion_10(c); }},
    };

    int passed = 0;
    std::cout << std::fixed << std::setprecision(2);
    for (const auto& [id, body] : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(t0);
        if (check.pass) {
            ++passed;
            std::cout << "criterion " << id << ": pass [" << elapsed << "s]\n";
        } else {
            std::cout << "criterion " << id << ": FAIL [" << elapsed << "s] " << check.detail
                      << "\n";
        }
    }
    std::cout << "acceptance: " << passed << "/10 criteria pass\n";
    return passed == 10 ? 0 : 1;
}
