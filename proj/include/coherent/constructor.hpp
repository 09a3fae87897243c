#pragma once

// Coherent measures realizing a sequence: atom i carries mass z_i and
// quotient q_i, and consecutive atoms share a line whose coordinate is the
// q-weighted average c_i = (q_i z_i + q_{i+1} z_{i+1}) / (z_i + z_{i+1}).

#include "coherent/measure.hpp"
#include "coherent/representation.hpp"
#include "coherent/sequence.hpp"

#include <string>
#include <vector>

namespace coherent {

/// Quotients q_1..q_n in {0, 1}.
struct QPattern {
    std::vector<int> q;

    static QPattern alternating(std::size_t n, int first = 1) {
        QPattern p;
        for (std::size_t i = 0; i < n; ++i) p.q.push_back((first + static_cast<int>(i)) % 2);
        return p;
    }

    bool is_alternating() const {
        for (std::size_t i = 1; i < q.size(); ++i)
            if (q[i] != 1 - q[i - 1]) return false;
        return true;
    }
};

inline QPattern parse_pattern(const std::string& csv) {
    QPattern p;
    for (const auto& r : parse_rational_list(csv)) {
        if (r != 0 && r != 1) throw InputError("pattern entries must be 0 or 1");
        p.q.push_back(r.is_zero() ? 0 : 1);
    }
    return p;
}

struct Construction {
    FiniteMeasure measure;
    Representation representation;
};

/// Atom i sits at (c_{i-1}, c_i) for odd i and at (c_i, c_{i-1}) for even i,
/// with c_0 = q_1 and c_n = q_n, so even-indexed c are vertical lines and
/// odd-indexed c horizontal ones. Throws StructureError when two lines of the
/// same direction coincide, which covers atoms landing on one location.
inline Construction measure_from_sequence(const ExactSequence& z, const QPattern& pattern) {
    const std::size_t n = z.n();
    if (pattern.q.size() != n)
        throw InputError("pattern has " + std::to_string(pattern.q.size()) + " entries for " + std::to_string(n) +
                         " sequence terms");
    for (int v : pattern.q)
        if (v != 0 && v != 1) throw InputError("pattern entries must be 0 or 1");

    std::vector<Rational> c(n + 1);
    c[0] = pattern.q.front();
    c[n] = pattern.q.back();
    for (std::size_t i = 1; i < n; ++i)
        c[i] = (pattern.q[i - 1] * z[i] + pattern.q[i] * z[i + 1]) / (z[i] + z[i + 1]);

    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = i + 2; j <= n; j += 2)
            if (c[i] == c[j])
                throw StructureError("sequence realization merges lines c_" + std::to_string(i) + " and c_" +
                                     std::to_string(j) + " at " + c[i].str());

    std::vector<Atom> atoms;
    std::vector<std::pair<Point, Rational>> quotient;
    for (std::size_t i = 1; i <= n; ++i) {
        Atom a = i % 2 == 1 ? Atom{c[i - 1], c[i], z[i]} : Atom{c[i], c[i - 1], z[i]};
        quotient.emplace_back(a.location(), Rational(pattern.q[i - 1]));
        atoms.push_back(std::move(a));
    }
    FiniteMeasure m(std::move(atoms));
    Representation rep{m, RationalVector(n)};
    for (const auto& [p, q] : quotient) rep.q[m.find(p)] = q;
    return {std::move(m), std::move(rep)};
}

struct Fixture {
    FiniteMeasure measure;
    std::optional<Representation> representation;
};

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"staircase", "rectangle-nonunique", "dirac-diagonal", "two-corner"};
    return names;
}

inline Fixture fixture(const std::string& name) {
    auto r = [](long p, long q) { return Rational(p, q); };
    if (name == "staircase") {
        FiniteMeasure m({{r(1, 8), r(1, 4), r(84, 196)},
                         {r(1, 2), r(1, 4), r(14, 196)},
                         {r(1, 2), r(3, 4), r(14, 196)},
                         {r(7, 8), r(3, 4), r(84, 196)}});
        return {m, Representation{m, {r(1, 8), 1, 0, r(7, 8)}}};
    }
    if (name == "rectangle-nonunique") {
        FiniteMeasure m({{r(3, 8), r(3, 8), r(1, 4)},
                         {r(3, 8), r(5, 8), r(1, 4)},
                         {r(5, 8), r(3, 8), r(1, 4)},
                         {r(5, 8), r(5, 8), r(1, 4)}});
        return {m, Representation{m, {r(1, 4), r(1, 2), r(1, 2), r(3, 4)}}};
    }
    if (name == "dirac-diagonal") {
        FiniteMeasure m({{r(1, 2), r(1, 2), 1}});
        return {m, Representation{m, {r(1, 2)}}};
    }
    if (name == "two-corner") {
        FiniteMeasure m({{0, 0, r(1, 2)}, {1, 1, r(1, 2)}});
        return {m, Representation{m, {0, 1}}};
    }
    throw InputError("unknown fixture '" + name + "'");
}

} // namespace coherent
