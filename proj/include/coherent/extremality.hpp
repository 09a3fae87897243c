#pragma once

// Extremality of finitely supported coherent distributions: a measure is
// extremal iff its representation is unique and minimal. Point
// classification, alternating cycles and axial-path tracing sit on top as
// structural diagnostics; the decision itself never depends on them.

#include "coherent/representation.hpp"
#include "coherent/support_graph.hpp"

#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace coherent {

enum class PointClass { LowerOut, UpperOut, Cut };

inline const char* to_string(PointClass c) {
    switch (c) {
    case PointClass::LowerOut: return "LowerOut";
    case PointClass::UpperOut: return "UpperOut";
    case PointClass::Cut: return "Cut";
    }
    return "?";
}

inline PointClass classify_point(const Rational& x, const Rational& y, const Rational& q) {
    if (q < min(x, y)) return PointClass::LowerOut;
    if (q > max(x, y)) return PointClass::UpperOut;
    return PointClass::Cut;
}

inline std::vector<PointClass> classify_points(const Representation& rep) {
    std::vector<PointClass> out;
    out.reserve(rep.q.size());
    for (std::size_t i = 0; i < rep.q.size(); ++i)
        out.push_back(classify_point(rep.measure[i].x, rep.measure[i].y, rep.q[i]));
    return out;
}

/// Axial cycle whose odd positions (1-based) carry mu-mass and even
/// positions carry nu-mass.
struct AlternatingCycle {
    AxialCycle cycle;
    std::vector<bool> in_mu; // position k (0-based): true for mu, false for nu
};

inline bool is_valid_alternating_cycle(const Representation& rep, const AlternatingCycle& c) {
    if (!is_valid_axial_cycle(c.cycle.points)) return false;
    if (c.cycle.atoms.size() != c.cycle.points.size() || c.in_mu.size() != c.cycle.atoms.size()) return false;
    for (std::size_t k = 0; k < c.cycle.atoms.size(); ++k) {
        const std::size_t a = c.cycle.atoms[k];
        if (a >= rep.measure.size() || rep.measure[a].location() != c.cycle.points[k]) return false;
        const bool odd = k % 2 == 0; // 1-based position k + 1
        if (c.in_mu[k] != odd) return false;
        if (odd ? rep.q[a].sign() <= 0 : rep.q[a] >= 1) return false;
    }
    return true;
}

/// Directed search on line nodes: an atom with q > 0 may be walked from its
/// vertical line to its horizontal line, an atom with q < 1 the other way.
/// Directed cycles are exactly alternating cycles; start atoms are tried in
/// canonical order and the shortest closing walk is returned.
inline std::optional<AlternatingCycle> find_alternating_cycle(const Representation& rep) {
    if (!check_in_R(rep)) throw PreconditionError("alternating-cycle search needs a valid representation");
    const SupportGraph g(rep.measure);
    const std::size_t nodes = g.num_nodes();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> arcs(nodes); // node -> (node, atom)
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (rep.q[i].sign() > 0) arcs[g.x_node(i)].emplace_back(g.y_node(i), i);
        if (rep.q[i] < 1) arcs[g.y_node(i)].emplace_back(g.x_node(i), i);
    }
    for (std::size_t p1 = 0; p1 < g.size(); ++p1) {
        if (rep.q[p1].sign() <= 0) continue;
        const std::size_t src = g.y_node(p1), dst = g.x_node(p1);
        std::vector<std::size_t> from(nodes, nodes), via(nodes, g.size());
        std::vector<char> seen(nodes, 0);
        std::queue<std::size_t> bfs;
        bfs.push(src);
        seen[src] = 1;
        while (!bfs.empty() && !seen[dst]) {
            const std::size_t v = bfs.front();
            bfs.pop();
            for (auto [w, atom] : arcs[v]) {
                if (atom == p1 || seen[w]) continue;
                seen[w] = 1;
                from[w] = v;
                via[w] = atom;
                bfs.push(w);
            }
        }
        if (!seen[dst]) continue;
        std::vector<std::size_t> back;
        for (std::size_t v = dst; v != src; v = from[v]) back.push_back(via[v]);
        AlternatingCycle c;
        c.cycle.atoms.push_back(p1);
        c.cycle.atoms.insert(c.cycle.atoms.end(), back.rbegin(), back.rend());
        for (std::size_t k = 0; k < c.cycle.atoms.size(); ++k) {
            c.cycle.points.push_back(g.point(c.cycle.atoms[k]));
            c.in_mu.push_back(k % 2 == 0);
        }
        return c;
    }
    return std::nullopt;
}

/// March of the structure theorem. From a point with q on one side of a line
/// coordinate, move along that line to the canonically first atom whose q
/// lies strictly on the other side; continue along the other line until a
/// cut point. Requires a valid representation; throws StructureError when
/// the march repeats a point, overloads a line, or gets stuck.
inline AxialPath trace_axial_path(const Representation& rep, std::size_t start) {
    if (!check_in_R(rep)) throw PreconditionError("path tracing needs a valid representation");
    if (start >= rep.measure.size()) throw InputError("start atom index out of range");
    const SupportGraph g(rep.measure);
    const auto classes = classify_points(rep);

    std::vector<char> visited(g.size(), 0);
    std::vector<int> x_load(g.x_lines().size(), 0), y_load(g.y_lines().size(), 0);
    auto visit = [&](std::size_t a) {
        if (visited[a]) throw StructureError("march revisits a support point");
        visited[a] = 1;
        if (++x_load[g.x_line_of(a)] > 2 || ++y_load[g.y_line_of(a)] > 2)
            throw StructureError("march places a third point on one line");
    };

    // along_x: move along the vertical line of `from`.
    auto march = [&](std::size_t from, bool along_x) {
        std::vector<std::size_t> seq;
        for (std::size_t cur = from;;) {
            const Rational& c = along_x ? rep.measure[cur].x : rep.measure[cur].y;
            const auto& line = along_x ? g.x_lines()[g.x_line_of(cur)] : g.y_lines()[g.y_line_of(cur)];
            const int side = (rep.q[cur] <=> c) < 0 ? -1 : 1;
            std::size_t next = g.size();
            for (auto j : line) {
                if (j == cur) continue;
                if (side < 0 ? rep.q[j] > c : rep.q[j] < c) { next = j; break; }
            }
            if (next == g.size()) throw StructureError("march finds no balancing point on a line");
            visit(next);
            seq.push_back(next);
            if (classes[next] == PointClass::Cut) return seq;
            cur = next;
            along_x = !along_x;
        }
    };

    visit(start);
    const Atom& s = rep.measure[start];
    std::vector<std::size_t> left, right;
    if (classes[start] == PointClass::Cut) {
        // Case II: a cut start is an endpoint unless q sits strictly off both coordinates.
        if (rep.q[start] != s.x) left = march(start, true);
        if (rep.q[start] != s.y) right = march(start, false);
    } else {
        left = march(start, true);
        right = march(start, false);
    }
    AxialPath p;
    p.atoms.assign(left.rbegin(), left.rend());
    p.atoms.push_back(start);
    p.atoms.insert(p.atoms.end(), right.begin(), right.end());
    if (p.atoms.back() < p.atoms.front()) std::reverse(p.atoms.begin(), p.atoms.end());
    for (auto a : p.atoms) p.points.push_back(g.point(a));
    return p;
}

enum class VerdictReason { NotCoherent, NotUnique, NotMinimal, Extremal };

inline const char* to_string(VerdictReason r) {
    switch (r) {
    case VerdictReason::NotCoherent: return "NotCoherent";
    case VerdictReason::NotUnique: return "NotUnique";
    case VerdictReason::NotMinimal: return "NotMinimal";
    case VerdictReason::Extremal: return "Extremal";
    }
    return "?";
}

struct ExtremalityVerdict {
    FiniteMeasure measure;
    bool coherent = false;
    bool unique = false;
    bool minimal = false;
    bool extremal = false;
    VerdictReason reason = VerdictReason::NotCoherent;
    std::size_t components = 0;
    bool flagged_for_review = false; // extremal with a disconnected support

    std::optional<Representation> representation;
    std::optional<FarkasCertificate> certificate;     // NotCoherent
    std::optional<Representation> second_witness;     // NotUnique
    std::optional<std::vector<std::pair<Rational, Rational>>> kernel_direction; // NotMinimal
    std::size_t kernel_dimension = 0;
    std::vector<PointClass> classes;                  // whenever a representation exists
    std::optional<AxialPath> path;                    // Extremal
    std::optional<std::string> path_error;            // Extremal whose trace failed
};

inline ExtremalityVerdict is_extremal(const FiniteMeasure& m) {
    ExtremalityVerdict v;
    v.measure = m;
    auto coh = find_representation(m);
    v.components = SupportGraph(m).components().size();
    if (!coh.coherent) {
        v.reason = VerdictReason::NotCoherent;
        v.certificate = std::move(coh.certificate);
        return v;
    }
    v.coherent = true;
    auto uq = uniqueness_check(m);
    v.representation = uq.witness;
    v.classes = classify_points(*v.representation);
    if (!uq.unique) {
        v.reason = VerdictReason::NotUnique;
        v.second_witness = std::move(uq.second_witness);
        return v;
    }
    v.unique = true;
    auto mn = minimality_check(*v.representation);
    v.kernel_dimension = mn.kernel_dimension;
    if (!mn.minimal) {
        v.reason = VerdictReason::NotMinimal;
        v.kernel_direction = std::move(mn.direction);
        return v;
    }
    v.minimal = true;
    v.extremal = true;
    v.reason = VerdictReason::Extremal;
    v.flagged_for_review = v.components > 1;
    try {
        v.path = trace_axial_path(*v.representation, 0);
    } catch (const StructureError& e) {
        v.path_error = e.what();
    }
    return v;
}

/// Post-hoc check of an Extremal verdict: the support is a cycle-free axial
/// path traced in full, its endpoints are cut points, and interior points
/// alternate between lower out points with q = 0 and upper out points with
/// q = 1. Classes are recomputed from q and must match the recorded ones.
inline bool verify_structure(const ExtremalityVerdict& v) {
    if (!v.extremal || !v.representation || !v.path) return false;
    const auto& rep = *v.representation;
    if (!check_in_R(rep)) return false;
    if (find_axial_cycle(rep.measure)) return false;
    const auto check = is_axial_path(rep.measure);
    if (!check.is_path) return false;
    const auto& path = *v.path;
    if (path.atoms.size() != rep.measure.size() || path.points != check.path.points) return false;
    if (!is_valid_axial_path(path.points)) return false;

    const auto classes = classify_points(rep);
    if (classes != v.classes) return false;
    const std::size_t len = path.atoms.size();
    if (classes[path.atoms.front()] != PointClass::Cut || classes[path.atoms.back()] != PointClass::Cut)
        return false;
    for (std::size_t k = 1; k + 1 < len; ++k) {
        const std::size_t a = path.atoms[k];
        switch (classes[a]) {
        case PointClass::LowerOut: if (!rep.q[a].is_zero()) return false; break;
        case PointClass::UpperOut: if (rep.q[a] != 1) return false; break;
        case PointClass::Cut: return false;
        }
        if (k > 1 && classes[a] == classes[path.atoms[k - 1]]) return false;
    }
    return true;
}

// Verdict JSON.

inline nlohmann::json points_to_json(const std::vector<Point>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pts) arr.push_back(point_to_json(p));
    return arr;
}

inline nlohmann::json serialize_verdict(const ExtremalityVerdict& v) {
    nlohmann::json doc;
    doc["coherent"] = v.coherent;
    doc["unique"] = v.unique;
    doc["minimal"] = v.minimal;
    doc["extremal"] = v.extremal;
    doc["reason"] = to_string(v.reason);
    doc["components"] = v.components;
    if (v.flagged_for_review) doc["review"] = "extremal verdict on a disconnected support";
    nlohmann::json classes = nlohmann::json::array();
    for (auto c : v.classes) classes.push_back(to_string(c));
    doc["classes"] = std::move(classes);
    doc["path"] = v.path ? points_to_json(v.path->points) : nlohmann::json::array();
    nlohmann::json w = nlohmann::json::object();
    if (v.representation) w["q"] = rational_list_to_json(v.representation->q);
    if (v.second_witness) w["second_q"] = rational_list_to_json(v.second_witness->q);
    if (v.certificate) w["farkas"] = rational_list_to_json(v.certificate->row_multipliers);
    if (v.kernel_direction) {
        nlohmann::json dir = nlohmann::json::array();
        for (const auto& [a, b] : *v.kernel_direction) dir.push_back({{"mu", a.str()}, {"nu", b.str()}});
        w["kernel_direction"] = std::move(dir);
        w["kernel_dimension"] = v.kernel_dimension;
    }
    if (v.path_error) w["path_error"] = *v.path_error;
    doc["witnesses"] = std::move(w);
    return doc;
}

} // namespace coherent
