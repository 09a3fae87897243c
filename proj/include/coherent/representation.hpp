#pragma once

// Representations m = mu + nu with (mu, nu) in the balance class, stored as
// the atomwise quotient q = mu / m. On every vertical line x = c the
// q-weighted mass equals c times the line mass, and likewise for horizontal
// lines; these are the only constraints on q besides 0 <= q <= 1.

#include "coherent/linalg.hpp"
#include "coherent/measure.hpp"
#include "coherent/support_graph.hpp"

#include <optional>
#include <vector>

namespace coherent {

struct Representation {
    FiniteMeasure measure;
    RationalVector q; // aligned with canonical atom order

    Rational mu(std::size_t i) const { return q[i] * measure[i].mass; }
    Rational nu(std::size_t i) const { return (Rational(1) - q[i]) * measure[i].mass; }
};

/// Balance system over q in [0,1]^n: x-lines first (increasing x), then
/// y-lines (increasing y).
struct RepresentationPolytope {
    LinearSystem system;
    std::size_t x_lines = 0;
    std::size_t y_lines = 0;
};

inline RepresentationPolytope build_polytope(const FiniteMeasure& m) {
    if (m.empty()) throw InputError("cannot build the representation polytope of an empty measure");
    const SupportGraph g(m);
    RepresentationPolytope p;
    p.system = LinearSystem(m.size(), VariableBound::unit());
    auto add_line = [&](const std::vector<std::size_t>& atoms, const Rational& coord) {
        RationalVector row(m.size());
        Rational line_mass;
        for (auto i : atoms) {
            row[i] = m[i].mass;
            line_mass += m[i].mass;
        }
        p.system.add_row(std::move(row), coord * line_mass);
    };
    for (std::size_t k = 0; k < g.x_lines().size(); ++k) add_line(g.x_lines()[k], g.x_coords()[k]);
    for (std::size_t k = 0; k < g.y_lines().size(); ++k) add_line(g.y_lines()[k], g.y_coords()[k]);
    p.x_lines = g.x_lines().size();
    p.y_lines = g.y_lines().size();
    return p;
}

/// Exact check of the balance equations and 0 <= q <= 1.
inline bool check_in_R(const Representation& rep) {
    const auto& m = rep.measure;
    if (rep.q.size() != m.size()) return false;
    for (const auto& v : rep.q)
        if (v < 0 || v > 1) return false;
    std::map<Rational, std::pair<Rational, Rational>> xl, yl; // coord -> (sum q m, sum m)
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Rational w = rep.q[i] * m[i].mass;
        xl[m[i].x].first += w;
        xl[m[i].x].second += m[i].mass;
        yl[m[i].y].first += w;
        yl[m[i].y].second += m[i].mass;
    }
    for (const auto& [c, s] : xl)
        if (s.first != c * s.second) return false;
    for (const auto& [c, s] : yl)
        if (s.first != c * s.second) return false;
    return true;
}

struct CoherenceVerdict {
    bool coherent = false;
    std::optional<Representation> witness;
    std::optional<FarkasCertificate> certificate; // over the build_polytope rows
};

inline CoherenceVerdict find_representation(const FiniteMeasure& m) {
    require_probability(m);
    const auto poly = build_polytope(m);
    const auto outcome = solve_feasibility(poly.system);
    CoherenceVerdict v;
    if (outcome.has_point()) {
        v.coherent = true;
        v.witness = Representation{m, outcome.point};
    } else {
        v.certificate = outcome.certificate;
    }
    return v;
}

struct UniquenessResult {
    bool unique = false;
    Representation witness;                      // the minimizer for `atom` when not unique
    std::optional<Representation> second_witness; // differs from `witness` at `atom`
    std::size_t atom = 0;
    std::vector<std::pair<Rational, Rational>> ranges; // [min q_i, max q_i]; filled up to `atom` on early exit
};

/// Unique iff every q_i has equal minimum and maximum over the polytope.
/// Throws PreconditionError for incoherent measures.
inline UniquenessResult uniqueness_check(const FiniteMeasure& m) {
    require_probability(m);
    const auto poly = build_polytope(m);
    const PolytopeOptimizer opt(poly.system);
    if (!opt.feasible()) throw PreconditionError("uniqueness is undefined for an incoherent measure");
    UniquenessResult r;
    RationalVector e(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        e[i] = 1;
        auto lo = opt.optimize(e, Sense::Minimize);
        auto hi = opt.optimize(e, Sense::Maximize);
        e[i] = 0;
        r.ranges.emplace_back(lo.value, hi.value);
        if (lo.value != hi.value) {
            r.unique = false;
            r.atom = i;
            r.witness = Representation{m, std::move(lo.point)};
            r.second_witness = Representation{m, std::move(hi.point)};
            return r;
        }
        if (i + 1 == m.size()) r.witness = Representation{m, std::move(lo.point)};
    }
    r.unique = true;
    return r;
}

struct MinimalityResult {
    bool minimal = false;
    std::size_t kernel_dimension = 0;
    // A kernel element not proportional to (mu, nu), as per-atom pairs; set
    // when not minimal. Eliminated coordinates are zero.
    std::optional<std::vector<std::pair<Rational, Rational>>> direction;
};

/// Kernel criterion: unknowns are the sub-pair masses (mu~_i, nu~_i) where
/// mu_i > 0 (resp. nu_i > 0); each line contributes
/// sum (1 - c) mu~ - c nu~ = 0. Minimal iff the kernel is one-dimensional.
inline MinimalityResult minimality_check(const Representation& rep) {
    if (!check_in_R(rep)) throw PreconditionError("minimality needs a valid representation");
    const auto& m = rep.measure;
    const SupportGraph g(m);
    // Column of mu~_i / nu~_i, or npos when forced to zero.
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> mu_col(m.size(), npos), nu_col(m.size(), npos);
    std::size_t width = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (rep.q[i].sign() > 0) mu_col[i] = width++;
        if (rep.q[i] < 1) nu_col[i] = width++;
    }
    std::vector<RationalVector> rows;
    auto add_line = [&](const std::vector<std::size_t>& atoms, const Rational& c) {
        RationalVector row(width);
        for (auto i : atoms) {
            if (mu_col[i] != npos) row[mu_col[i]] = Rational(1) - c;
            if (nu_col[i] != npos) row[nu_col[i]] = -c;
        }
        rows.push_back(std::move(row));
    };
    for (std::size_t k = 0; k < g.x_lines().size(); ++k) add_line(g.x_lines()[k], g.x_coords()[k]);
    for (std::size_t k = 0; k < g.y_lines().size(); ++k) add_line(g.y_lines()[k], g.y_coords()[k]);

    const auto basis = nullspace_basis(rows, width);
    MinimalityResult r;
    r.kernel_dimension = basis.size();
    r.minimal = basis.size() == 1;
    if (r.minimal) return r;

    RationalVector self(width);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (mu_col[i] != npos) self[mu_col[i]] = rep.mu(i);
        if (nu_col[i] != npos) self[nu_col[i]] = rep.nu(i);
    }
    auto proportional = [&](const RationalVector& v) {
        std::optional<Rational> ratio;
        for (std::size_t j = 0; j < width; ++j) {
            if (self[j].is_zero() != v[j].is_zero()) return false;
            if (self[j].is_zero()) continue;
            Rational t = v[j] / self[j];
            if (ratio && *ratio != t) return false;
            ratio = std::move(t);
        }
        return true;
    };
    for (const auto& v : basis) {
        if (proportional(v)) continue;
        std::vector<std::pair<Rational, Rational>> dir(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (mu_col[i] != npos) dir[i].first = v[mu_col[i]];
            if (nu_col[i] != npos) dir[i].second = v[nu_col[i]];
        }
        r.direction = std::move(dir);
        break;
    }
    return r;
}

// Representation JSON: the measure document plus "q".

inline nlohmann::json serialize_representation(const Representation& rep) {
    auto doc = serialize_measure(rep.measure);
    doc["q"] = rational_list_to_json(rep.q);
    return doc;
}

inline Representation parse_representation(const nlohmann::json& doc) {
    Representation rep{parse_measure(doc), {}};
    if (!doc.contains("q")) throw InputError("representation document needs a \"q\" array");
    rep.q = rational_list_from_json(doc.at("q"), "q");
    if (rep.q.size() != rep.measure.size())
        throw InputError("\"q\" has " + std::to_string(rep.q.size()) + " entries for " +
                         std::to_string(rep.measure.size()) + " atoms");
    return rep;
}

} // namespace coherent
