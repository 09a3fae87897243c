#pragma once

// Sequences z = (0, z_1, ..., z_n, 0) with positive interior summing to one,
// the discrepancy functional
//     Phi_a(z) = sum_i z_i |z_i/(z_{i-1}+z_i) - z_i/(z_i+z_{i+1})|^a
// and its restriction Psi_a to significant components, plus the reduction
// to the single-peak normal form.
//
// Scalars: double or Rational. For Rational sequences every comparison is
// exact; Phi itself is floating point unless the exponent is an integer
// (phi_exact).

#include "coherent/errors.hpp"
#include "coherent/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace coherent {

namespace detail {

inline double as_double(double v) { return v; }
inline double as_double(const Rational& r) { return r.to_double(); }

template <class T>
bool is_zero(const T& v) {
    if constexpr (std::is_same_v<T, Rational>) return v.is_zero();
    else return v == 0.0;
}

/// Equality used for "equal neighbours": exact for rationals, relative 1e-12
/// for doubles.
template <class T>
bool nearly_equal(const T& a, const T& b) {
    if constexpr (std::is_same_v<T, Rational>) return a == b;
    else return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

inline void check_alpha(double alpha) {
    if (!(alpha >= 1) || !std::isfinite(alpha))
        throw DomainError("exponent alpha must be a finite value >= 1");
}

} // namespace detail

template <class T>
class ZSequence {
  public:
    ZSequence() = default;

    /// From interior values z_1..z_n; zero endpoints are implied.
    static ZSequence from_interior(std::vector<T> interior) {
        ZSequence s;
        s.z_.reserve(interior.size() + 2);
        s.z_.push_back(T(0));
        for (auto& v : interior) s.z_.push_back(std::move(v));
        s.z_.push_back(T(0));
        s.validate();
        return s;
    }

    /// From the full list including both zero endpoints.
    static ZSequence from_full(std::vector<T> full) {
        ZSequence s;
        s.z_ = std::move(full);
        s.validate();
        return s;
    }

    /// Rescales positive interior values to unit sum.
    static ZSequence normalized(std::vector<T> interior) {
        T total(0);
        for (const auto& v : interior) total += v;
        if (!(total > T(0))) throw InputError("cannot normalize a sequence with nonpositive total");
        for (auto& v : interior) v /= total;
        return from_interior(std::move(interior));
    }

    std::size_t n() const { return z_.size() - 2; }
    const T& operator[](std::size_t i) const { return z_[i]; }
    const std::vector<T>& values() const { return z_; }
    std::vector<T> interior() const { return {z_.begin() + 1, z_.end() - 1}; }

    ZSequence reversed() const {
        ZSequence s;
        s.z_.assign(z_.rbegin(), z_.rend());
        return s;
    }

    friend bool operator==(const ZSequence&, const ZSequence&) = default;

  private:
    void validate() const {
        if (z_.size() < 3) throw InputError("a sequence needs at least one interior value");
        if (!detail::is_zero(z_.front()) || !detail::is_zero(z_.back()))
            throw InputError("sequence endpoints must be zero");
        T total(0);
        for (std::size_t i = 1; i + 1 < z_.size(); ++i) {
            if constexpr (std::is_same_v<T, double>)
                if (!std::isfinite(z_[i])) throw InputError("sequence values must be finite");
            if (!(z_[i] > T(0))) throw InputError("interior sequence values must be positive");
            total += z_[i];
        }
        if constexpr (std::is_same_v<T, Rational>) {
            if (total != 1) throw InputError("sequence must sum to exactly 1, got " + total.str());
        } else {
            if (std::abs(total - 1.0) > 1e-12) throw InputError("sequence must sum to 1 within 1e-12");
        }
    }

    std::vector<T> z_;
};

using RealSequence = ZSequence<double>;
using ExactSequence = ZSequence<Rational>;

inline RealSequence to_real(const ExactSequence& z) {
    std::vector<double> v;
    for (const auto& r : z.values()) v.push_back(r.to_double());
    // Conversion can drift the sum by an ulp or two, well inside tolerance.
    return RealSequence::from_full(std::move(v));
}

/// The base |z_i/(z_{i-1}+z_i) - z_i/(z_i+z_{i+1})| of the i-th term, 1 <= i <= n.
template <class T>
T phi_base(const ZSequence<T>& z, std::size_t i) {
    const T left = z[i] / (z[i - 1] + z[i]);
    const T right = z[i] / (z[i] + z[i + 1]);
    const T d = left - right;
    return d < T(0) ? T(-d) : d;
}

template <class T>
double phi_term(const ZSequence<T>& z, std::size_t i, double alpha) {
    return detail::as_double(z[i]) * std::pow(detail::as_double(phi_base(z, i)), alpha);
}

template <class T>
double phi(const ZSequence<T>& z, double alpha) {
    detail::check_alpha(alpha);
    double total = 0;
    for (std::size_t i = 1; i <= z.n(); ++i) total += phi_term(z, i, alpha);
    return total;
}

/// Exact Phi for integer exponents.
inline Rational phi_exact(const ExactSequence& z, unsigned alpha) {
    if (alpha < 1) throw DomainError("exponent alpha must be >= 1");
    Rational total;
    for (std::size_t i = 1; i <= z.n(); ++i) total += z[i] * pow(phi_base(z, i), alpha);
    return total;
}

enum class ComponentTag { Significant, Negligible };

inline const char* to_string(ComponentTag t) {
    return t == ComponentTag::Significant ? "Significant" : "Negligible";
}

namespace detail {

/// sqrt(alpha) * a < b for nonnegative a, b.
inline bool scaled_less(double alpha, double a, double b) { return std::sqrt(alpha) * a < b; }
inline bool scaled_less(const Rational& alpha, const Rational& a, const Rational& b) {
    return alpha * a * a < b * b;
}

template <class T>
auto alpha_as(double alpha) {
    if constexpr (std::is_same_v<T, Rational>) return Rational::from_double(alpha);
    else return alpha;
}

} // namespace detail

/// Significant iff sqrt(a) z_{i-1} < z_i and sqrt(a) z_i < z_{i+1}, or
/// z_{i-1} > sqrt(a) z_i and z_i > sqrt(a) z_{i+1}. Strict inequalities, so
/// ties are negligible. Index k of the result tags z_{k+1}.
template <class T>
std::vector<ComponentTag> tag_components(const ZSequence<T>& z, double alpha) {
    detail::check_alpha(alpha);
    const auto a = detail::alpha_as<T>(alpha);
    std::vector<ComponentTag> tags;
    tags.reserve(z.n());
    for (std::size_t i = 1; i <= z.n(); ++i) {
        const bool growth = detail::scaled_less(a, z[i - 1], z[i]) && detail::scaled_less(a, z[i], z[i + 1]);
        const bool decay = detail::scaled_less(a, z[i], z[i - 1]) && detail::scaled_less(a, z[i + 1], z[i]);
        tags.push_back(growth || decay ? ComponentTag::Significant : ComponentTag::Negligible);
    }
    return tags;
}

template <class T>
double psi(const ZSequence<T>& z, double alpha) {
    const auto tags = tag_components(z, alpha);
    double total = 0;
    for (std::size_t i = 1; i <= z.n(); ++i)
        if (tags[i - 1] == ComponentTag::Significant) total += phi_term(z, i, alpha);
    return total;
}

/// Tail bound of the significant-part estimate: |1 - 1/(1 + sqrt(a))|^a.
inline double negligible_tail(double alpha) {
    detail::check_alpha(alpha);
    return std::pow(1.0 - 1.0 / (1.0 + std::sqrt(alpha)), alpha);
}

enum class ShapeKind { Split, Peak };

struct ShapeFeature {
    std::size_t index;
    ShapeKind kind;
    friend bool operator==(const ShapeFeature&, const ShapeFeature&) = default;
};

template <class T>
std::vector<ShapeFeature> shape_features(const ZSequence<T>& z) {
    std::vector<ShapeFeature> out;
    for (std::size_t i = 1; i <= z.n(); ++i) {
        if (z[i - 1] > z[i] && z[i] < z[i + 1]) out.push_back({i, ShapeKind::Split});
        else if (z[i - 1] < z[i] && z[i] > z[i + 1]) out.push_back({i, ShapeKind::Peak});
    }
    return out;
}

struct SPrimeCheck {
    bool member = false;
    std::vector<int> violated; // condition numbers 1..4
};

/// Normal-form conditions: (1) no two adjacent values equal, endpoints
/// included; (2) no split; (3) exactly one peak; (4) exactly one negligible
/// component, located at the peak.
template <class T>
SPrimeCheck in_S_prime(const ZSequence<T>& z, double alpha) {
    SPrimeCheck r;
    for (std::size_t i = 0; i <= z.n(); ++i)
        if (detail::nearly_equal(z[i], z[i + 1])) { r.violated.push_back(1); break; }
    const auto features = shape_features(z);
    std::size_t splits = 0, peaks = 0, peak = 0;
    for (const auto& f : features) {
        if (f.kind == ShapeKind::Split) ++splits;
        else { ++peaks; peak = f.index; }
    }
    if (splits) r.violated.push_back(2);
    if (peaks != 1) r.violated.push_back(3);
    const auto tags = tag_components(z, alpha);
    std::size_t negligible = 0, where = 0;
    for (std::size_t k = 0; k < tags.size(); ++k)
        if (tags[k] == ComponentTag::Negligible) { ++negligible; where = k + 1; }
    if (negligible != 1 || peaks != 1 || where != peak) r.violated.push_back(4);
    r.member = r.violated.empty();
    return r;
}

namespace detail {

template <class T>
ZSequence<T> drop_and_rescale(const ZSequence<T>& z, std::size_t i) {
    std::vector<T> rest;
    for (std::size_t k = 1; k <= z.n(); ++k)
        if (k != i) rest.push_back(z[k]);
    return ZSequence<T>::normalized(std::move(rest));
}

} // namespace detail

/// One reduction pass, or nullopt when no step applies:
///   1. drop the first term equal to its right neighbour and rescale;
///   2. cut at the first split, renormalize both halves and keep the one with
///      larger Psi (the left one on ties);
///   4. drop the first negligible term that is not the peak and rescale.
/// Step 3 (a unique peak) holds automatically once 1 and 2 no longer apply.
template <class T>
std::optional<ZSequence<T>> reduce_step(const ZSequence<T>& z, double alpha) {
    for (std::size_t i = 1; i < z.n(); ++i)
        if (detail::nearly_equal(z[i], z[i + 1])) return detail::drop_and_rescale(z, i);

    const auto features = shape_features(z);
    for (const auto& f : features) {
        if (f.kind != ShapeKind::Split) continue;
        const std::size_t c = f.index;
        auto left = ZSequence<T>::normalized({z.values().begin() + 1, z.values().begin() + static_cast<std::ptrdiff_t>(c)});
        auto right = ZSequence<T>::normalized({z.values().begin() + static_cast<std::ptrdiff_t>(c) + 1, z.values().end() - 1});
        return psi(right, alpha) > psi(left, alpha) ? right : left;
    }

    std::size_t peak = 0;
    for (const auto& f : features)
        if (f.kind == ShapeKind::Peak) peak = f.index;
    const auto tags = tag_components(z, alpha);
    for (std::size_t i = 1; i <= z.n(); ++i)
        if (tags[i - 1] == ComponentTag::Negligible && i != peak) return detail::drop_and_rescale(z, i);
    return std::nullopt;
}

/// Applies reduce_step to a fixpoint (at most 10 n passes). Psi never
/// decreases along the way.
template <class T>
ZSequence<T> reduce_to_S_prime(ZSequence<T> z, double alpha) {
    detail::check_alpha(alpha);
    const std::size_t cap = 10 * z.n();
    for (std::size_t pass = 0; pass < cap; ++pass) {
        auto next = reduce_step(z, alpha);
        if (!next) break;
        z = std::move(*next);
    }
    return z;
}

// Sequence JSON: {"z": [...]} with or without explicit zero endpoints.

inline std::vector<Rational> parse_rational_list(const std::string& csv) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const auto piece = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(Rational::parse(piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

/// Interior values, or full values when both ends are zero and there are at
/// least three entries.
inline ExactSequence exact_sequence_from_values(std::vector<Rational> v) {
    if (v.size() >= 3 && v.front().is_zero() && v.back().is_zero()) return ExactSequence::from_full(std::move(v));
    return ExactSequence::from_interior(std::move(v));
}

inline nlohmann::json serialize_sequence(const ExactSequence& z) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : z.values()) arr.push_back(v.str());
    return {{"z", std::move(arr)}};
}

inline nlohmann::json serialize_sequence(const RealSequence& z) {
    return {{"z", z.values()}};
}

} // namespace coherent
