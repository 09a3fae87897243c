#pragma once

#include "coherent/errors.hpp"
#include "coherent/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace coherent {

struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

struct Atom {
    Rational x;
    Rational y;
    Rational mass;

    Point location() const { return {x, y}; }
};

/// Finitely many weighted atoms in the unit square. Atoms are kept in
/// canonical (x, y) lexicographic order and locations are pairwise distinct.
class FiniteMeasure {
  public:
    FiniteMeasure() = default;

    /// Validates ranges, positivity and distinctness, then sorts.
    explicit FiniteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        for (const auto& a : atoms_) {
            if (a.x < 0 || a.x > 1 || a.y < 0 || a.y > 1)
                throw InputError("atom (" + a.x.str() + ", " + a.y.str() + ") lies outside the unit square");
            if (a.mass.sign() <= 0)
                throw InputError("atom (" + a.x.str() + ", " + a.y.str() + ") has nonpositive mass " + a.mass.str());
        }
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& l, const Atom& r) { return l.location() < r.location(); });
        for (std::size_t i = 1; i < atoms_.size(); ++i)
            if (atoms_[i - 1].location() == atoms_[i].location())
                throw InputError("duplicate atom location (" + atoms_[i].x.str() + ", " + atoms_[i].y.str() + ")");
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    Rational total_mass() const {
        Rational t;
        for (const auto& a : atoms_) t += a.mass;
        return t;
    }
    bool is_probability() const { return total_mass() == 1; }

    /// Index of the atom at `p`, or size() when absent.
    std::size_t find(const Point& p) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                                   [](const Atom& a, const Point& q) { return a.location() < q; });
        if (it != atoms_.end() && it->location() == p) return static_cast<std::size_t>(it - atoms_.begin());
        return atoms_.size();
    }

  private:
    std::vector<Atom> atoms_;
};

using Marginal = std::map<Rational, Rational>;

inline Marginal marginal_x(const FiniteMeasure& m) {
    Marginal out;
    for (const auto& a : m.atoms()) out[a.x] += a.mass;
    return out;
}

inline Marginal marginal_y(const FiniteMeasure& m) {
    Marginal out;
    for (const auto& a : m.atoms()) out[a.y] += a.mass;
    return out;
}

inline void require_probability(const FiniteMeasure& m) {
    if (!m.is_probability())
        throw InputError("expected a probability measure, total mass is " + m.total_mass().str());
}

/// Sum of mass * |x - y|^alpha in floating point.
inline double moment_abs_diff(const FiniteMeasure& m, double alpha) {
    require_probability(m);
    if (!(alpha >= 0)) throw DomainError("moment exponent must be nonnegative");
    double total = 0;
    for (const auto& a : m.atoms())
        total += a.mass.to_double() * std::pow(std::abs((a.x - a.y).to_double()), alpha);
    return total;
}

/// Exact moment for integer exponents.
inline Rational moment_abs_diff_exact(const FiniteMeasure& m, unsigned alpha) {
    require_probability(m);
    Rational total;
    for (const auto& a : m.atoms()) total += a.mass * pow(abs(a.x - a.y), alpha);
    return total;
}

// ---------------------------------------------------------------------------
// JSON: {"atoms": [{"x": "p/q", "y": "...", "mass": "..."}]}

/// Reads a rational from a JSON string ("3/8", "0.25") or a JSON number.
inline Rational rational_from_json(const nlohmann::json& v, const std::string& what) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_unsigned()) return Rational(v.get<unsigned long long>());
    if (v.is_number_float()) return Rational::parse(v.dump()); // shortest round-trip text
    throw InputError(what + ": expected a rational string or number");
}

inline nlohmann::json rational_list_to_json(const std::vector<Rational>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : values) arr.push_back(v.str());
    return arr;
}

inline std::vector<Rational> rational_list_from_json(const nlohmann::json& arr, const std::string& what) {
    if (!arr.is_array()) throw InputError(what + ": expected an array");
    std::vector<Rational> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(rational_from_json(arr[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

inline nlohmann::json point_to_json(const Point& p) { return {{"x", p.x.str()}, {"y", p.y.str()}}; }

inline FiniteMeasure parse_measure(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("atoms") || !doc.at("atoms").is_array())
        throw InputError("measure document must be an object with an \"atoms\" array");
    std::vector<Atom> atoms;
    const auto& arr = doc.at("atoms");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& a = arr[i];
        const std::string where = "atoms[" + std::to_string(i) + "]";
        if (!a.is_object()) throw InputError(where + ": expected an object");
        for (const char* key : {"x", "y", "mass"})
            if (!a.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
        atoms.push_back({rational_from_json(a.at("x"), where + ".x"),
                         rational_from_json(a.at("y"), where + ".y"),
                         rational_from_json(a.at("mass"), where + ".mass")});
    }
    return FiniteMeasure(std::move(atoms));
}

inline FiniteMeasure parse_measure(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    return parse_measure(doc);
}

inline nlohmann::json serialize_measure(const FiniteMeasure& m) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.atoms())
        atoms.push_back({{"x", a.x.str()}, {"y", a.y.str()}, {"mass", a.mass.str()}});
    return {{"atoms", std::move(atoms)}};
}

} // namespace coherent
