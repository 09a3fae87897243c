#pragma once

// Line-incidence structure of a finite support. Each atom is an edge between
// its vertical line (x-node) and its horizontal line (y-node); axial cycles
// are exactly the cycles of this bipartite graph.

#include "coherent/measure.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace coherent {

class SupportGraph {
  public:
    explicit SupportGraph(const FiniteMeasure& m) : points_(m.size()) {
        std::map<Rational, std::size_t> xs, ys;
        for (std::size_t i = 0; i < m.size(); ++i) {
            points_[i] = m[i].location();
            xs.emplace(m[i].x, 0);
            ys.emplace(m[i].y, 0);
        }
        for (auto& [x, idx] : xs) {
            idx = x_coords_.size();
            x_coords_.push_back(x);
        }
        for (auto& [y, idx] : ys) {
            idx = y_coords_.size();
            y_coords_.push_back(y);
        }
        x_lines_.resize(x_coords_.size());
        y_lines_.resize(y_coords_.size());
        x_of_.resize(m.size());
        y_of_.resize(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            x_of_[i] = xs.at(m[i].x);
            y_of_[i] = ys.at(m[i].y);
            x_lines_[x_of_[i]].push_back(i);
            y_lines_[y_of_[i]].push_back(i);
        }
    }

    std::size_t size() const { return points_.size(); }
    const Point& point(std::size_t i) const { return points_[i]; }

    /// Atoms on each vertical / horizontal line, lines in increasing coordinate.
    const std::vector<std::vector<std::size_t>>& x_lines() const { return x_lines_; }
    const std::vector<std::vector<std::size_t>>& y_lines() const { return y_lines_; }
    const std::vector<Rational>& x_coords() const { return x_coords_; }
    const std::vector<Rational>& y_coords() const { return y_coords_; }
    std::size_t x_line_of(std::size_t atom) const { return x_of_[atom]; }
    std::size_t y_line_of(std::size_t atom) const { return y_of_[atom]; }

    /// Node ids in the bipartite line graph: x-lines first, then y-lines.
    std::size_t num_nodes() const { return x_lines_.size() + y_lines_.size(); }
    std::size_t x_node(std::size_t atom) const { return x_of_[atom]; }
    std::size_t y_node(std::size_t atom) const { return x_lines_.size() + y_of_[atom]; }

    /// Atoms sharing a line with `atom`, in canonical order.
    std::vector<std::size_t> neighbors(std::size_t atom) const {
        std::vector<std::size_t> out;
        for (auto j : x_lines_[x_of_[atom]]) if (j != atom) out.push_back(j);
        for (auto j : y_lines_[y_of_[atom]]) if (j != atom) out.push_back(j);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Connected components of the support under line sharing; each
    /// component lists its atoms in canonical order.
    std::vector<std::vector<std::size_t>> components() const {
        std::vector<std::size_t> parent(num_nodes());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (std::size_t i = 0; i < size(); ++i) parent[find(x_node(i))] = find(y_node(i));
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < size(); ++i) groups[find(x_node(i))].push_back(i);
        std::vector<std::vector<std::size_t>> out;
        for (auto& [root, atoms] : groups) out.push_back(std::move(atoms));
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::vector<Point> points_;
    std::vector<Rational> x_coords_, y_coords_;
    std::vector<std::vector<std::size_t>> x_lines_, y_lines_;
    std::vector<std::size_t> x_of_, y_of_;
};

/// Points p_1..p_2n with y_{2i-1} = y_{2i}, x_{2i} = x_{2i+1} and x_1 = x_2n.
struct AxialCycle {
    std::vector<std::size_t> atoms; // indices into the measure
    std::vector<Point> points;
};

/// Ordered traversal with consecutive points sharing a line and at most two
/// points on any line.
struct AxialPath {
    std::vector<std::size_t> atoms;
    std::vector<Point> points;
};

/// Checks the axial cycle pattern literally, without consulting any graph.
inline bool is_valid_axial_cycle(const std::vector<Point>& p) {
    const std::size_t len = p.size();
    if (len < 4 || len % 2 != 0) return false;
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = i + 1; j < len; ++j)
            if (p[i] == p[j]) return false;
    // 0-based: p[2k].y == p[2k+1].y and p[2k+1].x == p[2k+2].x, wrapping.
    for (std::size_t k = 0; k + 1 < len; k += 2) {
        if (p[k].y != p[k + 1].y) return false;
        if (k + 2 < len && p[k + 1].x != p[k + 2].x) return false;
    }
    return p.front().x == p.back().x;
}

inline bool is_valid_axial_path(const std::vector<Point>& p) {
    if (p.empty()) return false;
    std::map<Rational, int> on_x, on_y;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] == p[j]) return false;
        if (++on_x[p[i].x] > 2 || ++on_y[p[i].y] > 2) return false;
        if (i + 1 < p.size() && p[i].x != p[i + 1].x && p[i].y != p[i + 1].y) return false;
    }
    return true;
}

namespace detail {

inline AxialCycle make_cycle(const SupportGraph& g, std::vector<std::size_t> atoms) {
    AxialCycle c;
    for (auto a : atoms) c.points.push_back(g.point(a));
    c.atoms = std::move(atoms);
    return c;
}

} // namespace detail

/// First axial cycle closed by an atom in canonical order, or nullopt when
/// the line-incidence graph is a forest.
inline std::optional<AxialCycle> find_axial_cycle(const SupportGraph& g) {
    const std::size_t nodes = g.num_nodes();
    std::vector<std::size_t> parent(nodes);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    // forest adjacency: node -> (neighbor node, atom)
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> forest(nodes);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t xn = g.x_node(i), yn = g.y_node(i);
        const std::size_t rx = find(xn), ry = find(yn);
        if (rx != ry) {
            parent[rx] = ry;
            forest[xn].emplace_back(yn, i);
            forest[yn].emplace_back(xn, i);
            continue;
        }
        // Atom i closes a cycle: walk the forest from its y-line back to its x-line.
        std::vector<std::size_t> via(nodes, g.size()), from(nodes, nodes);
        std::vector<char> seen(nodes, 0);
        std::queue<std::size_t> q;
        q.push(yn);
        seen[yn] = 1;
        while (!q.empty()) {
            const std::size_t v = q.front();
            q.pop();
            if (v == xn) break;
            for (auto [w, atom] : forest[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                from[w] = v;
                via[w] = atom;
                q.push(w);
            }
        }
        // Sequence: atom i (x-line -> y-line), then forest atoms from y-line to x-line.
        std::vector<std::size_t> back;
        for (std::size_t v = xn; v != yn; v = from[v]) back.push_back(via[v]);
        std::vector<std::size_t> atoms{i};
        atoms.insert(atoms.end(), back.rbegin(), back.rend());
        return detail::make_cycle(g, std::move(atoms));
    }
    return std::nullopt;
}

inline std::optional<AxialCycle> find_axial_cycle(const FiniteMeasure& m) { return find_axial_cycle(SupportGraph(m)); }

struct AxialPathCheck {
    bool is_path = false;
    AxialPath path;                    // when is_path
    std::string reason;                // when not
    std::optional<AxialCycle> cycle;   // counterexample, if the support has a cycle
    std::optional<Point> crowded_line; // a point on a line holding three or more atoms
};

/// Decides whether the support can be ordered as an axial path; the
/// traversal starts from the endpoint that comes first canonically.
inline AxialPathCheck is_axial_path(const FiniteMeasure& m) {
    AxialPathCheck out;
    if (m.empty()) {
        out.reason = "empty support";
        return out;
    }
    const SupportGraph g(m);
    for (const auto& line : g.x_lines())
        if (line.size() > 2) {
            out.reason = "three or more atoms on the vertical line x = " + g.point(line[0]).x.str();
            out.crowded_line = g.point(line[0]);
            return out;
        }
    for (const auto& line : g.y_lines())
        if (line.size() > 2) {
            out.reason = "three or more atoms on the horizontal line y = " + g.point(line[0]).y.str();
            out.crowded_line = g.point(line[0]);
            return out;
        }
    if (auto cycle = find_axial_cycle(g)) {
        out.reason = "support contains an axial cycle";
        out.cycle = std::move(cycle);
        return out;
    }
    if (g.components().size() != 1) {
        out.reason = "support is not connected by shared lines";
        return out;
    }
    // Acyclic, connected, degree <= 2: a simple path. Start at the first endpoint.
    std::size_t start = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.neighbors(i).size() <= 1) { start = i; break; }
    std::vector<char> used(g.size(), 0);
    for (std::size_t cur = start, prev = g.size();;) {
        out.path.atoms.push_back(cur);
        out.path.points.push_back(g.point(cur));
        used[cur] = 1;
        std::size_t next = g.size();
        for (auto j : g.neighbors(cur))
            if (j != prev && !used[j]) { next = j; break; }
        if (next == g.size()) break;
        prev = cur;
        cur = next;
    }
    out.is_path = true;
    return out;
}

} // namespace coherent
