#pragma once

#include "cdga/dga.hpp"
#include "cdga/parse.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdga {

// Structural error in a model or map file; carries the line number.  Semantic
// failures (d^2 != 0, degree violations) propagate as plain invalid_argument
// from the validating constructors instead.
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

// Splits "<head> <name> = <expr>" after validating the fixed prefix; returns
// the name and the raw expression text.
inline std::pair<std::string, std::string> split_assignment(const std::string& line,
                                                            const std::string& head,
                                                            int line_no) {
    std::istringstream in(line);
    std::string word, name, eq;
    in >> word >> name >> eq;
    if (word != head || name.empty() || eq != "=")
        throw ParseError("line " + std::to_string(line_no) + ": expected '" + head +
                         " <name> = <polynomial>'");
    std::string expr;
    std::getline(in, expr);
    return {name, expr};
}

}  // namespace detail

// Parse a model file.  Lines: `generator <name> degree <d> <even|odd>`,
// `d <name> = <polynomial>`, `#` comments.  Generators without a
// differential line are closed.
inline CochainAlgebra parse_model(std::istream& in) {
    std::vector<std::string> lines;
    std::string raw;
    while (std::getline(in, raw)) lines.push_back(detail::strip_comment(raw));

    std::vector<std::pair<std::string, int>> gens;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        const auto tokens = detail::tokenize(lines[i]);
        if (tokens.empty()) continue;
        if (tokens[0] == "d") continue;
        if (tokens[0] != "generator")
            throw ParseError("line " + std::to_string(line_no) + ": unrecognized directive '" +
                             tokens[0] + "'");
        if (tokens.size() != 5 || tokens[2] != "degree")
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'generator <name> degree <d> <even|odd>'");
        int degree = 0;
        try {
            std::size_t used = 0;
            degree = std::stoi(tokens[3], &used);
            if (used != tokens[3].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) + ": invalid degree '" + tokens[3] +
                             "'");
        }
        if (degree < 1)
            throw ParseError("line " + std::to_string(line_no) + ": degree must be positive");
        if (tokens[4] != "even" && tokens[4] != "odd")
            throw ParseError("line " + std::to_string(line_no) + ": parity must be even or odd");
        if ((degree % 2 == 0) != (tokens[4] == "even"))
            throw ParseError("line " + std::to_string(line_no) + ": generator " + tokens[1] +
                             " declared " + tokens[4] + " but has degree " + tokens[3]);
        if (!seen.insert(tokens[1]).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate generator " +
                             tokens[1]);
        gens.emplace_back(tokens[1], degree);
    }
    if (gens.empty()) throw ParseError("model file declares no generators");

    Signature sig;
    try {
        sig = make_signature(gens);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid generator list: ") + e.what());
    }
    Algebra alg(std::move(sig));

    std::vector<Element> diff(alg.size(), alg.zero());
    std::vector<bool> assigned(alg.size(), false);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        const auto tokens = detail::tokenize(lines[i]);
        if (tokens.empty() || tokens[0] != "d") continue;
        const auto [name, expr] = detail::split_assignment(lines[i], "d", line_no);
        if (!alg.signature().has(name))
            throw ParseError("line " + std::to_string(line_no) + ": unknown generator " + name);
        const std::size_t slot = alg.signature().index_of(name);
        if (assigned[slot])
            throw ParseError("line " + std::to_string(line_no) +
                             ": duplicate differential for " + name);
        try {
            diff[slot] = parse_element(expr, alg);
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        assigned[slot] = true;
    }
    return make_cochain_algebra(alg, std::move(diff));
}

inline CochainAlgebra parse_model_text(const std::string& text) {
    std::istringstream in(text);
    return parse_model(in);
}

inline CochainAlgebra load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file " + path);
    return parse_model(in);
}

// Canonical rendering; parse(print(a)) reproduces `a`, and printing is a
// fixpoint on the output of parse_model.
inline std::string print_model(const CochainAlgebra& a) {
    const Signature& sig = a.signature();
    std::string out;
    for (std::size_t i = 0; i < sig.size(); ++i)
        out += "generator " + sig[i].name + " degree " + std::to_string(sig[i].degree) +
               (sig[i].is_even() ? " even\n" : " odd\n");
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (!a.diff[i].is_zero()) out += "d " + sig[i].name + " = " + to_string(a.diff[i]) + "\n";
    return out;
}

// Parse a self-map file against a model.  Lines: `alpha <gen> = <polynomial>`
// and `#` comments; generators without a line map to themselves.
inline Morphism parse_self_map(std::istream& in, const CochainAlgebra& a) {
    std::vector<Element> images;
    for (std::size_t i = 0; i < a.alg.size(); ++i) images.push_back(a.alg.generator(i));
    std::vector<bool> assigned(a.alg.size(), false);

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::strip_comment(raw);
        const auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;
        if (tokens[0] != "alpha")
            throw ParseError("line " + std::to_string(line_no) + ": unrecognized directive '" +
                             tokens[0] + "'");
        const auto [name, expr] = detail::split_assignment(line, "alpha", line_no);
        if (!a.signature().has(name))
            throw ParseError("line " + std::to_string(line_no) + ": unknown generator " + name);
        const std::size_t slot = a.signature().index_of(name);
        if (assigned[slot])
            throw ParseError("line " + std::to_string(line_no) + ": duplicate image for " + name);
        try {
            images[slot] = parse_element(expr, a.alg);
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        assigned[slot] = true;
    }
    return make_morphism(a, a, std::move(images));
}

inline Morphism parse_self_map_text(const std::string& text, const CochainAlgebra& a) {
    std::istringstream in(text);
    return parse_self_map(in, a);
}

inline Morphism load_self_map(const std::string& path, const CochainAlgebra& a) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open map file " + path);
    return parse_self_map(in, a);
}

inline std::string print_self_map(const Morphism& m) {
    const Signature& sig = m.source.signature();
    std::string out;
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (m.images[i] != m.source.alg.generator(i))
            out += "alpha " + sig[i].name + " = " + to_string(m.images[i]) + "\n";
    return out;
}

}  // namespace cdga
