#pragma once

// Exact rational linear algebra: a dense bounded-variable simplex (Bland's
// rule, two phases) and fraction-free elimination for rank and kernels.
// Problems here are desk-sized, so everything is dense.

#include "coherent/errors.hpp"
#include "coherent/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace coherent {

using RationalVector = std::vector<Rational>;

struct VariableBound {
    std::optional<Rational> lower; // nullopt = -infinity
    std::optional<Rational> upper; // nullopt = +infinity

    static VariableBound unit() { return {Rational(0), Rational(1)}; }
    static VariableBound nonnegative() { return {Rational(0), std::nullopt}; }
    static VariableBound free() { return {std::nullopt, std::nullopt}; }
    static VariableBound between(Rational lo, Rational hi) { return {std::move(lo), std::move(hi)}; }
};

struct LinearRow {
    RationalVector coeffs;
    Rational rhs;
};

/// Equality rows over bounded variables: { x : A x = b, lower <= x <= upper }.
struct LinearSystem {
    std::vector<LinearRow> rows;
    std::vector<VariableBound> bounds;

    LinearSystem() = default;
    explicit LinearSystem(std::size_t num_vars, VariableBound bound = VariableBound::nonnegative())
        : bounds(num_vars, bound) {}

    std::size_t num_vars() const { return bounds.size(); }

    void add_row(RationalVector coeffs, Rational rhs) {
        rows.push_back({std::move(coeffs), std::move(rhs)});
    }

    /// Throws InputError on width mismatches or inverted bounds.
    void validate() const {
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (rows[r].coeffs.size() != bounds.size())
                throw InputError("row " + std::to_string(r) + " has width " +
                                 std::to_string(rows[r].coeffs.size()) + ", expected " +
                                 std::to_string(bounds.size()));
        for (std::size_t j = 0; j < bounds.size(); ++j)
            if (bounds[j].lower && bounds[j].upper && *bounds[j].upper < *bounds[j].lower)
                throw InputError("variable " + std::to_string(j) + " has lower bound above upper bound");
    }
};

/// Multipliers y over the equality rows such that the combined row
/// (y^T A) x = y^T b cannot be met anywhere in the variable box.
struct FarkasCertificate {
    RationalVector row_multipliers;
};

enum class LpStatus { Feasible, Infeasible, Optimal, Unbounded };

enum class Sense { Maximize, Minimize };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    RationalVector point;                       // Feasible / Optimal
    Rational value;                             // Optimal
    std::optional<FarkasCertificate> certificate; // Infeasible

    bool has_point() const { return status == LpStatus::Feasible || status == LpStatus::Optimal; }
};

/// True iff x satisfies every row and bound exactly.
inline bool satisfies(const LinearSystem& sys, std::span<const Rational> x) {
    if (x.size() != sys.num_vars()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto& b = sys.bounds[j];
        if (b.lower && x[j] < *b.lower) return false;
        if (b.upper && x[j] > *b.upper) return false;
    }
    for (const auto& row : sys.rows) {
        Rational lhs;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!row.coeffs[j].is_zero()) lhs += row.coeffs[j] * x[j];
        if (lhs != row.rhs) return false;
    }
    return true;
}

/// Checks a Farkas certificate independently of the solver: the combined
/// row's range over the variable box must exclude the combined right-hand side.
inline bool verify_certificate(const LinearSystem& sys, const FarkasCertificate& cert) {
    if (cert.row_multipliers.size() != sys.rows.size()) return false;
    const std::size_t n = sys.num_vars();
    RationalVector combined(n);
    Rational rhs;
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
        const Rational& y = cert.row_multipliers[r];
        if (y.is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (!sys.rows[r].coeffs[j].is_zero()) combined[j] += y * sys.rows[r].coeffs[j];
        rhs += y * sys.rows[r].rhs;
    }
    // sup and inf of combined . x over the box; nullopt marks an infinite end.
    std::optional<Rational> sup = Rational(0), inf = Rational(0);
    for (std::size_t j = 0; j < n; ++j) {
        const Rational& c = combined[j];
        if (c.is_zero()) continue;
        const auto& hi = c.sign() > 0 ? sys.bounds[j].upper : sys.bounds[j].lower;
        const auto& lo = c.sign() > 0 ? sys.bounds[j].lower : sys.bounds[j].upper;
        if (sup) { if (hi) *sup += c * *hi; else sup.reset(); }
        if (inf) { if (lo) *inf += c * *lo; else inf.reset(); }
    }
    return (sup && *sup < rhs) || (inf && *inf > rhs);
}

namespace detail {

/// Dense simplex tableau over A s = b, s >= 0 (b >= 0 after row sign flips).
/// Each row carries its basic column; the objective row is recomputed per run.
class Tableau {
  public:
    std::size_t rows = 0;
    std::size_t cols = 0; // structural columns; rhs is stored separately
    std::vector<RationalVector> a;
    RationalVector b;
    std::vector<std::size_t> basis;

    void pivot(std::size_t pr, std::size_t pc) {
        const Rational inv = Rational(1) / a[pr][pc];
        for (std::size_t k = 0; k < cols; ++k)
            if (!a[pr][k].is_zero()) a[pr][k] *= inv;
        b[pr] *= inv;
        const RationalVector& prow = a[pr];
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || a[r][pc].is_zero()) continue;
            const Rational f = a[r][pc];
            for (std::size_t k = 0; k < cols; ++k)
                if (!prow[k].is_zero()) a[r][k].sub_product(f, prow[k]);
            b[r].sub_product(f, b[pr]);
        }
        basis[pr] = pc;
    }

    /// Minimizes cost . s with Bland's rule from the current feasible basis.
    /// `allowed` masks columns that may enter. Returns false if unbounded.
    bool minimize(const RationalVector& cost, const std::vector<char>& allowed) {
        // reduced_j = c_j - sum_r c_{basis[r]} a[r][j], updated after each pivot
        RationalVector reduced = cost;
        for (std::size_t r = 0; r < rows; ++r) {
            const Rational& cb = cost[basis[r]];
            if (cb.is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j)
                if (!a[r][j].is_zero()) reduced[j].sub_product(cb, a[r][j]);
        }
        while (true) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (allowed[j] && reduced[j].sign() < 0) { enter = j; break; }
            if (enter == cols) return true;

            std::size_t leave = rows;
            Rational best_ratio;
            for (std::size_t r = 0; r < rows; ++r) {
                if (a[r][enter].sign() <= 0) continue;
                Rational ratio = b[r] / a[r][enter];
                if (leave == rows || ratio < best_ratio ||
                    (ratio == best_ratio && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = std::move(ratio);
                }
            }
            if (leave == rows) return false;
            pivot(leave, enter);
            const Rational f = reduced[enter];
            for (std::size_t j = 0; j < cols; ++j)
                if (!a[leave][j].is_zero()) reduced[j].sub_product(f, a[leave][j]);
        }
    }

    RationalVector duals(const RationalVector& cost, const std::vector<std::size_t>& initial_basis) const {
        // For an initial identity basis, B^-1 sits under those columns, so
        // y_i = c_{init_i} - reduced_{init_i}, with reduced = c - c_B^T B^-1 A.
        RationalVector y(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t col = initial_basis[i];
            Rational cbinv; // (c_B^T B^-1)_i
            for (std::size_t r = 0; r < this->rows; ++r)
                if (!a[r][col].is_zero()) cbinv += cost[basis[r]] * a[r][col];
            y[i] = cbinv;
        }
        return y;
    }
};

} // namespace detail

/// Phase one is solved once at construction; any number of linear objectives
/// can then be optimized from the same feasible basis.
class PolytopeOptimizer {
  public:
    explicit PolytopeOptimizer(const LinearSystem& sys) : n_(sys.num_vars()) {
        sys.validate();
        build(sys);
        phase_one(sys);
    }

    bool feasible() const { return feasible_; }

    /// Feasible point, or the Farkas certificate when empty.
    LpOutcome feasibility() const {
        LpOutcome out;
        if (!feasible_) {
            out.status = LpStatus::Infeasible;
            out.certificate = certificate_;
            return out;
        }
        out.status = LpStatus::Feasible;
        out.point = recover(tableau_);
        return out;
    }

    LpOutcome optimize(std::span<const Rational> objective, Sense sense) const {
        if (objective.size() != n_) throw InputError("objective width does not match the system");
        if (!feasible_) return feasibility();

        // Translate the objective into standard-form columns.
        RationalVector cost(tableau_.cols);
        Rational offset;
        for (std::size_t j = 0; j < n_; ++j) {
            Rational c = sense == Sense::Maximize ? -objective[j] : objective[j];
            const auto& m = map_[j];
            switch (m.kind) {
            case Map::Shift: cost[m.col] += c; offset += c * m.offset; break;
            case Map::Negate: cost[m.col] -= c; offset += c * m.offset; break;
            case Map::Split: cost[m.col] += c; cost[m.col2] -= c; break;
            }
        }
        detail::Tableau t = tableau_;
        LpOutcome out;
        if (!t.minimize(cost, allowed_)) {
            out.status = LpStatus::Unbounded;
            return out;
        }
        out.status = LpStatus::Optimal;
        out.point = recover(t);
        Rational value;
        for (std::size_t j = 0; j < n_; ++j)
            if (!objective[j].is_zero()) value += objective[j] * out.point[j];
        out.value = value;
        return out;
    }

  private:
    struct Map {
        enum Kind { Shift, Negate, Split } kind = Shift; // x = off + s | x = off - s | x = s - s2
        std::size_t col = 0, col2 = 0;
        Rational offset;
    };

    void build(const LinearSystem& sys) {
        std::size_t col = 0;
        map_.resize(n_);
        std::vector<std::pair<std::size_t, Rational>> box_rows; // (column, width)
        for (std::size_t j = 0; j < n_; ++j) {
            const auto& bd = sys.bounds[j];
            Map& m = map_[j];
            if (bd.lower) {
                m.kind = Map::Shift;
                m.col = col++;
                m.offset = *bd.lower;
                if (bd.upper) box_rows.emplace_back(m.col, *bd.upper - *bd.lower);
            } else if (bd.upper) {
                m.kind = Map::Negate;
                m.col = col++;
                m.offset = *bd.upper;
            } else {
                m.kind = Map::Split;
                m.col = col++;
                m.col2 = col++;
            }
        }
        const std::size_t structural = col;
        const std::size_t eq_rows = sys.rows.size();
        const std::size_t slack_cols = box_rows.size();
        // Layout: [structural | box slacks | artificials (one per equality row)]
        detail::Tableau& t = tableau_;
        t.rows = eq_rows + box_rows.size();
        t.cols = structural + slack_cols + eq_rows;
        t.a.assign(t.rows, RationalVector(t.cols));
        t.b.assign(t.rows, Rational());
        t.basis.assign(t.rows, 0);
        row_sign_.assign(eq_rows, 1);
        artificial_begin_ = structural + slack_cols;

        for (std::size_t r = 0; r < eq_rows; ++r) {
            const auto& row = sys.rows[r];
            Rational rhs = row.rhs;
            for (std::size_t j = 0; j < n_; ++j) {
                const Rational& c = row.coeffs[j];
                if (c.is_zero()) continue;
                const Map& m = map_[j];
                switch (m.kind) {
                case Map::Shift: t.a[r][m.col] += c; rhs.sub_product(c, m.offset); break;
                case Map::Negate: t.a[r][m.col] -= c; rhs.sub_product(c, m.offset); break;
                case Map::Split: t.a[r][m.col] += c; t.a[r][m.col2] -= c; break;
                }
            }
            if (rhs.sign() < 0) {
                row_sign_[r] = -1;
                for (auto& v : t.a[r]) if (!v.is_zero()) v = -v;
                rhs = -rhs;
            }
            t.b[r] = rhs;
            t.a[r][artificial_begin_ + r] = 1;
            t.basis[r] = artificial_begin_ + r;
        }
        for (std::size_t k = 0; k < box_rows.size(); ++k) {
            const std::size_t r = eq_rows + k;
            t.a[r][box_rows[k].first] = 1;
            t.a[r][structural + k] = 1;
            t.b[r] = box_rows[k].second;
            t.basis[r] = structural + k;
        }
        initial_basis_ = t.basis;
        allowed_.assign(t.cols, 1);
        for (std::size_t c = artificial_begin_; c < t.cols; ++c) allowed_[c] = 0;
    }

    void phase_one(const LinearSystem& sys) {
        detail::Tableau& t = tableau_;
        RationalVector cost(t.cols);
        for (std::size_t c = artificial_begin_; c < t.cols; ++c) cost[c] = 1;
        std::vector<char> all(t.cols, 1);
        t.minimize(cost, all); // bounded below by zero

        Rational infeasibility;
        for (std::size_t r = 0; r < t.rows; ++r)
            if (t.basis[r] >= artificial_begin_) infeasibility += t.b[r];
        if (infeasibility.sign() > 0) {
            feasible_ = false;
            const RationalVector y = t.duals(cost, initial_basis_);
            FarkasCertificate cert;
            cert.row_multipliers.resize(sys.rows.size());
            for (std::size_t r = 0; r < sys.rows.size(); ++r)
                cert.row_multipliers[r] = row_sign_[r] < 0 ? -y[r] : y[r];
            certificate_ = std::move(cert);
            return;
        }
        feasible_ = true;

        // Drive zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t r = 0; r < t.rows;) {
            if (t.basis[r] < artificial_begin_) { ++r; continue; }
            std::size_t pc = artificial_begin_;
            for (std::size_t c = 0; c < artificial_begin_; ++c)
                if (!t.a[r][c].is_zero()) { pc = c; break; }
            if (pc < artificial_begin_) {
                t.pivot(r, pc);
                ++r;
            } else {
                t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(r));
                t.b.erase(t.b.begin() + static_cast<std::ptrdiff_t>(r));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(r));
                --t.rows;
            }
        }
    }

    RationalVector recover(const detail::Tableau& t) const {
        RationalVector s(t.cols);
        for (std::size_t r = 0; r < t.rows; ++r) s[t.basis[r]] = t.b[r];
        RationalVector x(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const Map& m = map_[j];
            switch (m.kind) {
            case Map::Shift: x[j] = m.offset + s[m.col]; break;
            case Map::Negate: x[j] = m.offset - s[m.col]; break;
            case Map::Split: x[j] = s[m.col] - s[m.col2]; break;
            }
        }
        return x;
    }

    std::size_t n_ = 0;
    std::vector<Map> map_;
    detail::Tableau tableau_;
    std::vector<std::size_t> initial_basis_;
    std::vector<int> row_sign_;
    std::vector<char> allowed_;
    std::size_t artificial_begin_ = 0;
    bool feasible_ = false;
    std::optional<FarkasCertificate> certificate_;
};

/// Feasible point of `sys`, or a Farkas certificate of emptiness.
inline LpOutcome solve_feasibility(const LinearSystem& sys) {
    return PolytopeOptimizer(sys).feasibility();
}

/// Exact optimum and an attaining vertex; Infeasible and Unbounded are
/// reported as statuses.
inline LpOutcome optimize_linear(std::span<const Rational> objective, const LinearSystem& sys, Sense sense) {
    if (objective.size() != sys.num_vars()) throw InputError("objective width does not match the system");
    return PolytopeOptimizer(sys).optimize(objective, sense);
}

// ---------------------------------------------------------------------------
// Fraction-free elimination

namespace detail {

struct EchelonForm {
    std::vector<std::vector<mpz_class>> m; // rank rows in echelon form
    std::vector<std::size_t> pivot_cols;
    std::size_t width = 0;
};

inline std::size_t common_width(std::span<const RationalVector> rows) {
    if (rows.empty()) return 0;
    const std::size_t w = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != w) throw InputError("rows of unequal width");
    return w;
}

/// Bareiss elimination on the rows scaled to integers.
inline EchelonForm bareiss(std::span<const RationalVector> rows, std::size_t width) {
    std::vector<std::vector<mpz_class>> m;
    m.reserve(rows.size());
    for (const auto& row : rows) {
        mpz_class lcm = 1;
        for (const auto& v : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.denominator().get_mpz_t());
        std::vector<mpz_class> irow(width);
        for (std::size_t j = 0; j < width; ++j)
            irow[j] = row[j].numerator() * (lcm / row[j].denominator());
        m.push_back(std::move(irow));
    }

    EchelonForm out;
    out.width = width;
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < width && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            for (std::size_t j = c + 1; j < width; ++j) {
                m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        out.pivot_cols.push_back(c);
        ++r;
    }
    m.resize(r);
    out.m = std::move(m);
    return out;
}

} // namespace detail

inline std::size_t rank(std::span<const RationalVector> rows) {
    const std::size_t w = detail::common_width(rows);
    return detail::bareiss(rows, w).pivot_cols.size();
}

/// Exact kernel basis {v : rows . v = 0}; one primitive integer vector per
/// free column, with that free coordinate equal to a positive value.
inline std::vector<RationalVector> nullspace_basis(std::span<const RationalVector> rows, std::size_t width) {
    if (!rows.empty() && detail::common_width(rows) != width) throw InputError("rows do not match the stated width");
    const detail::EchelonForm ech = detail::bareiss(rows, width);
    std::vector<char> is_pivot(width, 0);
    for (auto c : ech.pivot_cols) is_pivot[c] = 1;

    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < width; ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(width);
        v[f] = 1;
        for (std::size_t k = ech.pivot_cols.size(); k-- > 0;) {
            const std::size_t pc = ech.pivot_cols[k];
            Rational acc;
            for (std::size_t j = pc + 1; j < width; ++j)
                if (ech.m[k][j] != 0 && !v[j].is_zero()) acc += Rational(ech.m[k][j]) * v[j];
            v[pc] = -acc / Rational(ech.m[k][pc]);
        }
        // Scale to a primitive integer vector.
        mpz_class lcm = 1, gcd = 0;
        for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.denominator().get_mpz_t());
        for (auto& x : v) {
            x *= Rational(lcm);
            mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), x.numerator().get_mpz_t());
        }
        if (gcd > 1)
            for (auto& x : v) x /= Rational(gcd);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<RationalVector> nullspace_basis(std::span<const RationalVector> rows) {
    return nullspace_basis(rows, detail::common_width(rows));
}

} // namespace coherent
