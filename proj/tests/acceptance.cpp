// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "coherent/coherent.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace coherent;

namespace {

// Tolerances and limits.
constexpr double kSmallAlphaTol = 1e-6;
constexpr double kWitnessRelTol = 1e-12;
constexpr double kLimitRelTol = 0.01;
constexpr double kAttainFraction = 0.98;
constexpr double kBoundSlack = 1e-9;
constexpr double kReductionSlack = 1e-12;
constexpr double kTailSlack = 1e-12;

constexpr double kLimitCriterion1 = 1;
constexpr double kLimitPerSmallAlpha = 10;
constexpr double kLimitCriterion3 = 120;
constexpr double kLimitPerDelta = 60;
constexpr double kLimitCriterion5 = 30;
constexpr double kLimitCriterion6 = 300;
constexpr double kLimitCriterion7 = 60;

Rational R(long p, long q = 1) { return Rational(p, q); }

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

int failures = 0;

void report(int id, const char* title, Outcome o, double seconds, double limit) {
    o.require(seconds < limit, "runtime over " + std::to_string(limit) + " s");
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title, seconds,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
}

// 1 ------------------------------------------------------------------------

Outcome example_pipeline() {
    Outcome o;
    const auto m = fixture("staircase").measure;
    const auto coh = find_representation(m);
    o.require(coh.coherent, "not coherent");
    if (!coh.coherent) return o;
    o.require(coh.witness->q == RationalVector{R(1, 8), R(1), R(0), R(7, 8)}, "q differs");
    o.require(uniqueness_check(m).unique, "not unique");
    o.require(minimality_check(*coh.witness).minimal, "not minimal");
    const auto v = is_extremal(m);
    o.require(v.extremal, "not extremal");
    o.require(v.classes == std::vector<PointClass>{PointClass::Cut, PointClass::UpperOut, PointClass::LowerOut,
                                                   PointClass::Cut},
              "classes differ");
    o.require(is_axial_path(m).is_path, "support is not an axial path");
    o.require(!find_axial_cycle(m), "axial cycle found");
    o.require(verify_structure(v), "structure check failed");
    return o;
}

// 2 ------------------------------------------------------------------------

Outcome small_alpha(double alpha, double& worst_seconds) {
    Outcome o;
    Stopwatch sw;
    const double target = std::pow(2.0, -alpha);
    const auto r = maximize_phi(alpha, SearchConfig{});
    worst_seconds = std::max(worst_seconds, sw.seconds());
    char buf[160];
    std::snprintf(buf, sizeof buf, "alpha=%g best=%.15g target=%.15g", alpha, r.value, target);
    o.require(std::fabs(r.value - target) <= kSmallAlphaTol, buf);

    // (0, 1/2, 1/2, 0): both bases are exactly 1/2 and the masses sum to 1,
    // so the functional is 2^-alpha; integer exponents are evaluated outright.
    const auto half = ExactSequence::from_interior({R(1, 2), R(1, 2)});
    Rational mass;
    for (std::size_t i = 1; i <= half.n(); ++i) {
        o.require(phi_base(half, i) == R(1, 2), "base is not 1/2");
        mass += half[i];
    }
    o.require(mass == 1, "masses do not sum to 1");
    const double rounded = std::nearbyint(alpha);
    if (rounded == alpha) {
        o.require(phi_exact(half, static_cast<unsigned>(alpha)) == pow(R(1, 2), static_cast<unsigned>(alpha)),
                  "exact value differs");
    }
    o.require(phi(half, alpha) == target, "floating evaluation differs from 2^-alpha");
    return o;
}

// 3 ------------------------------------------------------------------------

Outcome asymptotics() {
    Outcome o;
    const double limit = 2.0 / std::exp(1.0);
    for (double a : {50.0, 100.0, 200.0, 400.0}) {
        const double closed = 2.0 * std::pow(1.0 - 1.0 / (a - 1.0), a);
        const double aw = a * phi(witness_peak(a), a);
        char buf[200];
        std::snprintf(buf, sizeof buf, "alpha=%g witness %.15g vs closed form %.15g", a, aw, closed);
        o.require(std::fabs(aw - closed) <= kWitnessRelTol * closed, buf);
        const auto r = maximize_phi(a, SearchConfig{});
        const double ab = a * r.value, env = envelope_upper_bound(a);
        std::snprintf(buf, sizeof buf, "alpha=%g alpha*best=%.12g outside [%.12g, %.12g]", a, ab, aw, env);
        o.require(aw <= ab && ab <= env, buf);
        if (a == 400.0) {
            std::snprintf(buf, sizeof buf, "alpha*best=%.12g not within 1%% of %.12g", ab, limit);
            o.require(std::fabs(ab - limit) <= kLimitRelTol * limit, buf);
        }
    }
    return o;
}

// 4 ------------------------------------------------------------------------

Outcome threshold(const Rational& delta, double& worst_seconds) {
    Outcome o;
    Stopwatch sw;
    const auto r = maximize_threshold(delta, SearchConfig{});
    worst_seconds = std::max(worst_seconds, sw.seconds());
    const double bound = threshold_bound(delta).to_double();
    char buf[200];
    std::snprintf(buf, sizeof buf, "delta=%s value=%.12g bound=%.12g", delta.str().c_str(), r.value.to_double(), bound);
    o.require(r.value.to_double() >= kAttainFraction * bound, buf);
    o.require(r.max_candidate.to_double() <= bound + kBoundSlack, std::string("candidate above bound, ") + buf);
    o.require(threshold_mass(r.measure, delta) == r.value, "reported value does not match its measure");
    return o;
}

// 5 ------------------------------------------------------------------------

Outcome roundtrip() {
    Outcome o;
    std::mt19937_64 rng(20240531);
    std::uniform_int_distribution<long> len(1, 10), weight(1, 1000), first(0, 1);
    for (int it = 0; it < 100; ++it) {
        std::vector<Rational> w;
        const long n = len(rng);
        for (long i = 0; i < n; ++i) w.emplace_back(weight(rng));
        const auto z = ExactSequence::normalized(std::move(w));
        const auto pattern = QPattern::alternating(z.n(), static_cast<int>(first(rng)));
        Construction b;
        try {
            b = measure_from_sequence(z, pattern);
        } catch (const StructureError& e) {
            o.require(false, std::string("construction collided: ") + e.what());
            continue;
        }
        const std::string tag = " at sample " + std::to_string(it);
        o.require(check_in_R(b.representation), "representation fails the balance equations" + tag);
        o.require(find_representation(b.measure).coherent, "solver finds no representation" + tag);
        o.require(is_axial_path(b.measure).is_path, "support is not an axial path" + tag);
        for (unsigned a : {2u, 5u})
            o.require(moment_abs_diff_exact(b.measure, a) == phi_exact(z, a), "moment differs" + tag);
    }
    return o;
}

// 6 ------------------------------------------------------------------------

// A measure m fails to be extremal exactly when m = (m1 + m2)/2 for coherent
// m1 != m2, and both halves then live on the support of m. Writing
// m1 = mu1 + nu1 and m2 = mu2 + nu2, the program has variables
// mu1, nu1, mu2, nu2 >= 0 with
//   mu1 + nu1 + mu2 + nu2 = 2m atomwise, sum (mu1 + nu1) = 1,
//   per line with coordinate c: (1 - c) sum mu_k = c sum nu_k for k = 1, 2.
// m is extremal iff max m1_i <= m_i for every atom i.
bool decomposition_oracle_extremal(const FiniteMeasure& m) {
    const std::size_t n = m.size(), vars = 4 * n;
    auto MU1 = [](std::size_t i) { return i; };
    auto NU1 = [n](std::size_t i) { return n + i; };
    auto MU2 = [n](std::size_t i) { return 2 * n + i; };
    auto NU2 = [n](std::size_t i) { return 3 * n + i; };

    LinearSystem sys(vars, VariableBound::nonnegative());
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector row(vars);
        row[MU1(i)] = row[NU1(i)] = row[MU2(i)] = row[NU2(i)] = 1;
        sys.add_row(std::move(row), 2 * m[i].mass);
    }
    {
        RationalVector total(vars);
        for (std::size_t i = 0; i < n; ++i) total[MU1(i)] = total[NU1(i)] = 1;
        sys.add_row(std::move(total), 1);
    }
    for (bool along_x : {true, false}) {
        std::map<Rational, std::vector<std::size_t>> lines;
        for (std::size_t i = 0; i < n; ++i) lines[along_x ? m[i].x : m[i].y].push_back(i);
        for (const auto& [c, atoms] : lines) {
            RationalVector first(vars), second(vars);
            for (auto i : atoms) {
                first[MU1(i)] = 1 - c;
                first[NU1(i)] = -c;
                second[MU2(i)] = 1 - c;
                second[NU2(i)] = -c;
            }
            sys.add_row(std::move(first), 0);
            sys.add_row(std::move(second), 0);
        }
    }
    const PolytopeOptimizer opt(sys);
    if (!opt.feasible()) return false; // m itself is not coherent
    const auto start = opt.feasibility().point;
    for (std::size_t i = 0; i < n; ++i)
        if (start[MU1(i)] + start[NU1(i)] != m[i].mass) return false;
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector objective(vars);
        objective[MU1(i)] = objective[NU1(i)] = 1;
        const auto r = opt.optimize(objective, Sense::Maximize);
        if (r.value > m[i].mass) return false;
    }
    return true;
}

struct Census {
    std::size_t candidates = 0, coherent = 0, extremal = 0;
};

// Every support of at most 4 points of {k/8}^2 with masses in {k/16}. A
// coherent measure has equal x and y means on each line-connected component,
// which prunes the enumeration before any program is solved.
Outcome exhaustive_structure(Census& census) {
    Outcome o;
    constexpr int grid = 8, units = 16, max_atoms = 4;
    std::vector<std::pair<int, int>> pts;
    for (int a = 0; a <= grid; ++a)
        for (int b = 0; b <= grid; ++b) pts.push_back({a, b});

    std::vector<int> chosen, mass, component, offset;
    // Components of the chosen support and each atom's x - y offset. Returns
    // false when some component has no mass assignment with zero balance.
    auto prepare_support = [&]() {
        const std::size_t k = chosen.size();
        component.assign(k, 0);
        offset.assign(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            component[i] = static_cast<int>(i);
            offset[i] = pts[chosen[i]].first - pts[chosen[i]].second;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (pts[chosen[i]].first == pts[chosen[j]].first || pts[chosen[i]].second == pts[chosen[j]].second) {
                    const int from = component[j], to = component[i];
                    for (auto& c : component)
                        if (c == from) c = to;
                }
        for (std::size_t i = 0; i < k; ++i) {
            bool below = false, above = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (component[j] != component[i]) continue;
                below |= offset[j] < 0;
                above |= offset[j] > 0;
            }
            if (below != above) return false;
        }
        return true;
    };
    auto balanced = [&]() {
        long balance[max_atoms] = {};
        for (std::size_t i = 0; i < chosen.size(); ++i) balance[component[i]] += static_cast<long>(mass[i]) * offset[i];
        for (long b : balance)
            if (b != 0) return false;
        return true;
    };

    auto examine = [&]() {
        ++census.candidates;
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < chosen.size(); ++i)
            atoms.push_back({R(pts[chosen[i]].first, grid), R(pts[chosen[i]].second, grid), R(mass[i], units)});
        const FiniteMeasure m(std::move(atoms));
        const auto v = is_extremal(m);
        if (!v.coherent) return;
        ++census.coherent;
        const bool oracle = decomposition_oracle_extremal(m);
        auto doc = [&] { return serialize_measure(m).dump(); };
        if (v.extremal != oracle) o.require(false, "verdict and oracle disagree on " + doc());
        if (!v.extremal) return;
        ++census.extremal;
        if (find_axial_cycle(m)) o.require(false, "extremal measure with an axial cycle " + doc());
        if (!verify_structure(v)) o.require(false, "extremal measure fails the structure check " + doc());
    };

    std::function<void(std::size_t, int)> masses = [&](std::size_t slot, int left) {
        if (slot + 1 == chosen.size()) {
            mass[slot] = left;
            if (balanced()) examine();
            return;
        }
        const int rest = static_cast<int>(chosen.size() - slot - 1);
        for (int u = 1; u <= left - rest; ++u) {
            mass[slot] = u;
            masses(slot + 1, left - u);
        }
    };
    std::function<void(std::size_t, std::size_t)> supports = [&](std::size_t from, std::size_t k) {
        if (chosen.size() == k) {
            if (!prepare_support()) return;
            mass.assign(k, 0);
            masses(0, units);
            return;
        }
        for (std::size_t p = from; p < pts.size(); ++p) {
            chosen.push_back(static_cast<int>(p));
            supports(p + 1, k);
            chosen.pop_back();
        }
    };
    for (std::size_t k = 1; k <= max_atoms; ++k) supports(0, k);

    const auto rect = fixture("rectangle-nonunique");
    const auto v = is_extremal(rect.measure);
    o.require(v.reason == VerdictReason::NotUnique, "rectangle is not reported as non-unique");
    bool witnessed = false;
    for (const auto* rep : {v.representation ? &*v.representation : nullptr,
                            v.second_witness ? &*v.second_witness : nullptr, &*rect.representation}) {
        if (!rep) continue;
        const auto c = find_alternating_cycle(*rep);
        witnessed = witnessed || (c && is_valid_alternating_cycle(*rep, *c));
    }
    o.require(witnessed, "no alternating cycle for the rectangle");
    return o;
}

// 7 ------------------------------------------------------------------------

Outcome reductions() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> len(1, 12);
    for (double a : {4.0, 16.0, 64.0}) {
        std::uniform_real_distribution<double> spread(-std::log(a) * 2 - 1, std::log(a) * 2 + 1);
        const double tail = negligible_tail(a);
        const double expected_tail = std::pow(std::fabs(1.0 - 1.0 / (1.0 + std::sqrt(a))), a);
        o.require(tail == expected_tail, "tail constant differs");
        for (int it = 0; it < 1000; ++it) {
            std::vector<double> v(static_cast<std::size_t>(len(rng)));
            for (auto& x : v) x = std::exp(spread(rng));
            const auto z = RealSequence::normalized(std::move(v));
            const double p = phi(z, a), s = psi(z, a);
            char buf[120];
            std::snprintf(buf, sizeof buf, "alpha=%g sample %d: phi=%.17g psi+tail=%.17g", a, it, p, s + tail);
            o.require(p <= s + tail + kTailSlack, buf);
            const auto r = reduce_to_S_prime(z, a);
            std::snprintf(buf, sizeof buf, "alpha=%g sample %d: psi dropped by reduction", a, it);
            o.require(psi(r, a) >= s - kReductionSlack, buf);
            std::snprintf(buf, sizeof buf, "alpha=%g sample %d: reduction left the normal form", a, it);
            o.require(in_S_prime(r, a).member, buf);
        }
    }
    return o;
}

} // namespace

int main() {
    {
        Stopwatch sw;
        auto o = example_pipeline();
        report(1, "example measure: coherent, unique, minimal, extremal, path-shaped", o, sw.seconds(), kLimitCriterion1);
    }
    {
        Outcome all;
        double worst = 0;
        for (double a : {1.0, 1.5, 2.0}) {
            const auto o = small_alpha(a, worst);
            all.require(o.pass, o.detail);
        }
        report(2, "small exponents reach 2^-alpha", all, worst, kLimitPerSmallAlpha);
    }
    {
        Stopwatch sw;
        auto o = asymptotics();
        report(3, "large exponents between witness and envelope, near 2/e", o, sw.seconds(), kLimitCriterion3);
    }
    {
        Outcome all;
        double worst = 0;
        for (const auto& d : {R(3, 5), R(3, 4), R(9, 10)}) {
            const auto o = threshold(d, worst);
            all.require(o.pass, o.detail);
        }
        report(4, "threshold search attains and respects 2(1-d)/(2-d)", all, worst, kLimitPerDelta);
    }
    {
        Stopwatch sw;
        auto o = roundtrip();
        report(5, "sequence realizations are coherent paths with matching moments", o, sw.seconds(), kLimitCriterion5);
    }
    {
        Stopwatch sw;
        Census census;
        auto o = exhaustive_structure(census);
        const double t = sw.seconds();
        std::printf("    %zu candidates, %zu coherent, %zu extremal\n", census.candidates, census.coherent,
                    census.extremal);
        report(6, "exhaustive small measures: verdicts match decomposition oracle", o, t, kLimitCriterion6);
    }
    {
        Stopwatch sw;
        auto o = reductions();
        report(7, "tail bound and normal-form reduction", o, sw.seconds(), kLimitCriterion7);
    }
    return failures == 0 ? 0 : 1;
}
