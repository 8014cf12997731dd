#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdga {

enum class Parity { Even, Odd };

struct Generator {
    std::string name;
    int degree = 0;

    Parity parity() const { return degree % 2 == 0 ? Parity::Even : Parity::Odd; }
    bool is_even() const { return degree % 2 == 0; }
    bool is_odd() const { return degree % 2 != 0; }
};

inline bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// An ordered list of graded generators.  The order is fixed at construction
// and determines both the monomial exponent layout and the term order.
class Signature {
public:
    Signature() = default;

    explicit Signature(std::vector<Generator> gens) : gens_(std::move(gens)) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            const Generator& g = gens_[i];
            if (!is_identifier(g.name))
                throw std::invalid_argument("generator name is not an identifier: '" + g.name + "'");
            if (g.degree < 1)
                throw std::invalid_argument("generator " + g.name + " has non-positive degree");
            if (!index_.emplace(g.name, i).second)
                throw std::invalid_argument("duplicate generator name: " + g.name);
        }
    }

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }

    bool has(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::invalid_argument("unknown generator: " + name);
        return it->second;
    }

    bool operator==(const Signature& o) const {
        if (gens_.size() != o.gens_.size()) return false;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name != o.gens_[i].name || gens_[i].degree != o.gens_[i].degree) return false;
        return true;
    }
    bool operator!=(const Signature& o) const { return !(*this == o); }

private:
    std::vector<Generator> gens_;
    std::map<std::string, std::size_t> index_;
};

// Convenience constructor validating an explicit parity tag against the degree.
inline Signature make_signature(const std::vector<std::pair<std::string, int>>& gens) {
    std::vector<Generator> v;
    v.reserve(gens.size());
    for (const auto& [name, degree] : gens) v.push_back(Generator{name, degree});
    return Signature(std::move(v));
}

}  // namespace cdga
