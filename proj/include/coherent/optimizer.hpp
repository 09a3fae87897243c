#pragma once

// Numerical search for large values of Phi_a over sequences, the closed-form
// peak witness and upper envelope for a >= 4, and the threshold problem
// sup P(|X - Y| >= d) over coherent measures.

#include "coherent/constructor.hpp"
#include "coherent/linalg.hpp"
#include "coherent/sequence.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace coherent {

struct SearchConfig {
    int n_max = 8;
    int restarts = 8;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;
    bool use_grid = true;
    bool use_peak_family = true;
    bool use_local_search = true;

    void validate() const {
        if (n_max < 1) throw InputError("n-max must be at least 1");
        if (restarts < 1) throw InputError("restarts must be at least 1");
        if (!(tolerance > 0)) throw InputError("tolerance must be positive");
    }
};

/// splitmix64 finalizer; one independent stream per (seed, index).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline void require_witness_alpha(double alpha) {
    if (!(alpha > 2) || !std::isfinite(alpha)) throw DomainError("the peak witness needs alpha > 2");
}

/// (0, 1/a, (a-2)/a, 1/a, 0).
inline RealSequence witness_peak(double alpha) {
    require_witness_alpha(alpha);
    const double side = 1.0 / alpha;
    return RealSequence::from_interior({side, 1.0 - 2.0 * side, side});
}

inline ExactSequence witness_peak_exact(const Rational& alpha) {
    if (!(alpha > 2)) throw DomainError("the peak witness needs alpha > 2");
    const Rational side = Rational(1) / alpha;
    return ExactSequence::from_interior({side, (alpha - 2) / alpha, side});
}

/// Closed form of Phi_a at the witness: (2/a)(1 - 1/(a-1))^a.
inline double witness_value(double alpha) {
    require_witness_alpha(alpha);
    return 2.0 / alpha * std::pow(1.0 - 1.0 / (alpha - 1.0), alpha);
}

/// Upper bound on a * sup Phi_a for a >= 4, assembled from the tail bound
/// and the growth, decay and peak estimates; tends to 2/e.
inline double envelope_upper_bound(double alpha) {
    if (!(alpha >= 4) || !std::isfinite(alpha)) throw DomainError("the envelope needs alpha >= 4");
    const double s = std::sqrt(alpha);
    const double tail = std::pow(1.0 - 1.0 / (1.0 + s), alpha);
    const double growth = 2.0 / (alpha * (s - 1.0));
    const double decay = 2.0 / (s * (alpha - 1.0)) * std::pow(1.0 - 1.0 / alpha, alpha);
    const double peak = 2.0 / (alpha + 1.0) * std::pow(1.0 - 1.0 / (alpha + 1.0), alpha);
    return alpha * (tail + growth + decay + peak);
}

struct PhiSearchResult {
    RealSequence z;
    double value = -1;
    std::string strategy;
};

namespace detail {

struct Incumbent {
    PhiSearchResult best;
    void offer(const RealSequence& z, double value, const char* strategy) {
        if (value > best.value) best = {z, value, strategy};
    }
};

inline double safe_phi(const std::vector<double>& interior, double alpha, RealSequence* out = nullptr) {
    try {
        auto z = RealSequence::normalized(interior);
        const double v = phi(z, alpha);
        if (out) *out = std::move(z);
        return std::isfinite(v) ? v : -1;
    } catch (const InputError&) {
        return -1;
    }
}

/// Every composition of `grid` into n positive parts, n <= 4.
inline void grid_search(double alpha, int n_max, Incumbent& inc) {
    constexpr int grid = 60;
    std::vector<int> parts;
    std::function<void(int, int)> rec = [&](int remaining, int slots) {
        if (slots == 1) {
            parts.push_back(remaining);
            std::vector<double> interior;
            for (int p : parts) interior.push_back(static_cast<double>(p) / grid);
            RealSequence z;
            const double v = safe_phi(interior, alpha, &z);
            if (v >= 0) inc.offer(z, v, "grid");
            parts.pop_back();
            return;
        }
        for (int k = 1; k <= remaining - (slots - 1); ++k) {
            parts.push_back(k);
            rec(remaining - k, slots - 1);
            parts.pop_back();
        }
    };
    for (int n = 1; n <= std::min(4, n_max); ++n) rec(grid, n);
}

/// Peak of height 1 with left and right tails p, p/r, p/r^2, ...
inline std::vector<double> peak_shape(int left, int right, double log_p, double log_r) {
    std::vector<double> v;
    for (int k = left; k >= 1; --k) v.push_back(std::exp(log_p - (k - 1) * log_r));
    v.push_back(1.0);
    for (int k = 1; k <= right; ++k) v.push_back(std::exp(log_p - (k - 1) * log_r));
    return v;
}

/// Golden-section maximization of a unimodal-ish f on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + g * (b - a); fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

inline void peak_family_search(double alpha, int n_max, double tol, Incumbent& inc) {
    for (int left = 0; left < n_max; ++left) {
        for (int right = 0; left + right + 1 <= n_max; ++right) {
            double log_p = -std::log(std::max(alpha, 2.0));
            double log_r = 0.5 * std::log(std::max(alpha, 1.0)) + 1.0;
            auto value = [&](double lp, double lr) { return safe_phi(peak_shape(left, right, lp, lr), alpha); };
            for (int round = 0; round < 6; ++round) {
                if (left + right > 0)
                    log_p = golden_max([&](double lp) { return value(lp, log_r); }, -40.0, 0.0, std::max(tol, 1e-9));
                if (left > 1 || right > 1)
                    log_r = golden_max([&](double lr) { return value(log_p, lr); }, 0.0, 40.0, std::max(tol, 1e-9));
            }
            RealSequence z;
            const double v = safe_phi(peak_shape(left, right, log_p, log_r), alpha, &z);
            if (v >= 0) inc.offer(z, v, "peak-family");
        }
    }
}

/// Coordinate ascent on log-masses with halving steps.
inline void local_search(double alpha, std::vector<double> u, double tol, Incumbent& inc) {
    auto eval = [&](const std::vector<double>& w) {
        const double top = *std::max_element(w.begin(), w.end());
        std::vector<double> interior;
        for (double x : w) interior.push_back(std::exp(std::max(x - top, -600.0)));
        return safe_phi(interior, alpha);
    };
    double current = eval(u);
    constexpr int max_evals = 200000;
    int evals = 0;
    for (double step = 1.0; step >= tol && evals < max_evals; step *= 0.5) {
        for (bool improved = true; improved && evals < max_evals;) {
            improved = false;
            for (std::size_t i = 0; i < u.size(); ++i) {
                for (double dir : {1.0, -1.0}) {
                    u[i] += dir * step;
                    const double v = eval(u);
                    ++evals;
                    if (v > current) {
                        current = v;
                        improved = true;
                        break;
                    }
                    u[i] -= dir * step;
                }
            }
        }
    }
    const double top = *std::max_element(u.begin(), u.end());
    std::vector<double> interior;
    for (double x : u) interior.push_back(std::exp(std::max(x - top, -600.0)));
    RealSequence z;
    const double v = safe_phi(interior, alpha, &z);
    if (v >= 0) inc.offer(z, v, "local-search");
}

inline std::vector<double> log_masses(const RealSequence& z) {
    std::vector<double> u;
    for (std::size_t i = 1; i <= z.n(); ++i) u.push_back(std::log(z[i]));
    return u;
}

} // namespace detail

/// Best sequence found by the enabled strategies, then reduced to the
/// single-peak normal form when that does not lower the value. For a > 2 the
/// peak witness is always a candidate.
inline PhiSearchResult maximize_phi(double alpha, const SearchConfig& cfg) {
    detail::check_alpha(alpha);
    cfg.validate();
    detail::Incumbent inc;
    if (alpha > 2) {
        const auto w = witness_peak(alpha);
        inc.offer(w, phi(w, alpha), "witness");
    }
    if (cfg.use_grid) detail::grid_search(alpha, cfg.n_max, inc);
    if (cfg.use_peak_family) detail::peak_family_search(alpha, cfg.n_max, cfg.tolerance, inc);
    if (cfg.use_local_search) {
        if (inc.best.value >= 0) detail::local_search(alpha, detail::log_masses(inc.best.z), cfg.tolerance, inc);
        if (alpha > 2) detail::local_search(alpha, detail::log_masses(witness_peak(alpha)), cfg.tolerance, inc);
        for (int n = 1; n <= cfg.n_max; ++n) {
            for (int r = 0; r < cfg.restarts; ++r) {
                std::mt19937_64 rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(n) * 1000003ULL + r));
                std::uniform_real_distribution<double> dist(-std::log(alpha) - 2.0, 0.0);
                std::vector<double> u(static_cast<std::size_t>(n));
                for (auto& x : u) x = dist(rng);
                detail::local_search(alpha, std::move(u), cfg.tolerance, inc);
            }
        }
    }
    if (inc.best.value < 0) {
        // Every strategy disabled: the single-atom sequence is the floor.
        const auto one = RealSequence::from_interior({1.0});
        inc.offer(one, phi(one, alpha), "trivial");
    }
    const auto reduced = reduce_to_S_prime(inc.best.z, alpha);
    inc.offer(reduced, phi(reduced, alpha), "reduced");
    return inc.best;
}

struct SweepRow {
    double alpha = 0;
    double best = 0;
    RealSequence best_z;
    double witness = 0;
    double envelope = 0; // bound on alpha * sup Phi

    double alpha_best() const { return alpha * best; }
    double alpha_witness() const { return alpha * witness; }
};

inline std::vector<SweepRow> asymptotic_sweep(const std::vector<double>& alphas, const SearchConfig& cfg) {
    if (alphas.empty()) throw InputError("sweep needs at least one alpha");
    for (double a : alphas)
        if (!(a >= 4)) throw DomainError("sweep alphas must be >= 4");
    std::vector<SweepRow> rows;
    for (double a : alphas) {
        const auto r = maximize_phi(a, cfg);
        rows.push_back({a, r.value, r.z, phi(witness_peak(a), a), envelope_upper_bound(a)});
    }
    return rows;
}

inline std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "alpha,best,alpha_best,witness,alpha_witness,envelope,n_best\n";
    for (const auto& r : rows) {
        out += format_g12(r.alpha) + ',' + format_g12(r.best) + ',' + format_g12(r.alpha_best()) + ',' +
               format_g12(r.witness) + ',' + format_g12(r.alpha_witness()) + ',' + format_g12(r.envelope) + ',' +
               std::to_string(r.best_z.n()) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Threshold problem

/// 2(1 - d) / (2 - d).
inline Rational threshold_bound(const Rational& delta) { return 2 * (1 - delta) / (2 - delta); }

inline void require_threshold_delta(const Rational& delta) {
    if (!(delta > Rational(1, 2)) || delta > 1) throw DomainError("delta must lie in (1/2, 1]");
}

/// Mass of atoms with |x - y| >= delta.
inline Rational threshold_mass(const FiniteMeasure& m, const Rational& delta) {
    Rational total;
    for (const auto& a : m.atoms())
        if (abs(a.x - a.y) >= delta) total += a.mass;
    return total;
}

struct ThresholdResult {
    FiniteMeasure measure;
    Rational value;
    Rational bound;
    Rational max_candidate; // largest value over every evaluated candidate
    std::size_t candidates = 0;
    std::string source;
};

namespace detail {

/// Exact LP over balanced pairs (mu, nu) supported on a product grid that
/// contains delta and 1 - delta: maximize the mass on |x - y| >= delta.
inline std::pair<FiniteMeasure, Rational> threshold_grid_lp(const Rational& delta, int resolution) {
    std::vector<Rational> coords;
    for (int k = 0; k <= resolution; ++k) coords.push_back(Rational(k, resolution));
    coords.push_back(delta);
    coords.push_back(1 - delta);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    const std::size_t c = coords.size(), points = c * c, vars = 2 * points;

    LinearSystem sys(vars, VariableBound::nonnegative());
    // variable layout: point (a, b) -> mu at 2(a c + b), nu at 2(a c + b) + 1
    for (std::size_t a = 0; a < c; ++a) {
        RationalVector row(vars);
        for (std::size_t b = 0; b < c; ++b) {
            row[2 * (a * c + b)] = 1 - coords[a];
            row[2 * (a * c + b) + 1] = -coords[a];
        }
        sys.add_row(std::move(row), 0);
    }
    for (std::size_t b = 0; b < c; ++b) {
        RationalVector row(vars);
        for (std::size_t a = 0; a < c; ++a) {
            row[2 * (a * c + b)] = 1 - coords[b];
            row[2 * (a * c + b) + 1] = -coords[b];
        }
        sys.add_row(std::move(row), 0);
    }
    sys.add_row(RationalVector(vars, Rational(1)), 1);

    RationalVector objective(vars);
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = 0; b < c; ++b)
            if (abs(coords[a] - coords[b]) >= delta) objective[2 * (a * c + b)] = objective[2 * (a * c + b) + 1] = 1;

    const auto out = optimize_linear(objective, sys, Sense::Maximize);
    if (out.status != LpStatus::Optimal) throw StructureError("threshold grid program did not reach an optimum");
    std::vector<Atom> atoms;
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = 0; b < c; ++b) {
            Rational mass = out.point[2 * (a * c + b)] + out.point[2 * (a * c + b) + 1];
            if (mass.sign() > 0) atoms.push_back({coords[a], coords[b], std::move(mass)});
        }
    return {FiniteMeasure(std::move(atoms)), out.value};
}

} // namespace detail

/// Searches sequence realizations and grid-supported coherent measures for
/// the largest mass on {|x - y| >= delta}.
inline ThresholdResult maximize_threshold(const Rational& delta, const SearchConfig& cfg) {
    require_threshold_delta(delta);
    cfg.validate();
    ThresholdResult res;
    res.bound = threshold_bound(delta);
    res.value = -1;
    res.max_candidate = -1;
    auto offer = [&](const FiniteMeasure& m, const Rational& v, const char* source) {
        ++res.candidates;
        if (v > res.max_candidate) res.max_candidate = v;
        if (v > res.value) {
            res.value = v;
            res.measure = m;
            res.source = source;
        }
    };

    // Realizations of random rational sequences under both alternating patterns.
    for (int n = 1; n <= cfg.n_max; ++n) {
        for (int r = 0; r < cfg.restarts; ++r) {
            std::mt19937_64 rng(stream_seed(cfg.seed ^ 0x7468726573686f6cULL, static_cast<std::uint64_t>(n) * 1000003ULL + r));
            std::uniform_int_distribution<long> weight(1, 64);
            std::vector<Rational> w;
            for (int i = 0; i < n; ++i) w.emplace_back(weight(rng));
            const auto z = ExactSequence::normalized(std::move(w));
            for (int first : {0, 1}) {
                try {
                    const auto built = measure_from_sequence(z, QPattern::alternating(z.n(), first));
                    offer(built.measure, threshold_mass(built.measure, delta), "sequence-realization");
                } catch (const StructureError&) {
                }
            }
        }
    }

    auto [m, v] = detail::threshold_grid_lp(delta, 10);
    offer(m, v, "grid-program");
    return res;
}

} // namespace coherent
