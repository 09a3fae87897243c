#include "coherent/support_graph.hpp"

#include "coherent/constructor.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

using namespace coherent;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

FiniteMeasure uniform(const std::vector<std::pair<long, long>>& pts, long den = 8) {
    std::vector<Atom> atoms;
    for (auto [x, y] : pts) atoms.push_back({R(x, den), R(y, den), R(1, static_cast<long>(pts.size()))});
    return FiniteMeasure(std::move(atoms));
}

// Independent oracle: DFS over atoms looking for a closed walk that
// alternates shared-y and shared-x steps through distinct atoms.
bool has_axial_cycle_dfs(const FiniteMeasure& m) {
    const std::size_t n = m.size();
    std::vector<char> used(n, 0);
    std::function<bool(std::size_t, std::size_t, bool, std::size_t)> walk =
        [&](std::size_t start, std::size_t cur, bool next_shares_y, std::size_t len) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == cur) continue;
            const bool share = next_shares_y ? m[j].y == m[cur].y : m[j].x == m[cur].x;
            if (!share) continue;
            // closing step: must share x with start after an even-length walk
            if (j == start) {
                if (!next_shares_y && len >= 4 && len % 2 == 0) return true;
                continue;
            }
            if (used[j]) continue;
            used[j] = 1;
            if (walk(start, j, !next_shares_y, len + 1)) return true;
            used[j] = 0;
        }
        return false;
    };
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(used.begin(), used.end(), 0);
        used[s] = 1;
        if (walk(s, s, true, 1)) return true;
    }
    return false;
}

FiniteMeasure random_grid_measure(std::mt19937_64& rng, long grid, long max_atoms) {
    std::uniform_int_distribution<long> coord(0, grid), count(1, max_atoms);
    std::set<std::pair<long, long>> pts;
    const long n = count(rng);
    while (static_cast<long>(pts.size()) < n) pts.insert({coord(rng), coord(rng)});
    return uniform({pts.begin(), pts.end()}, grid);
}

} // namespace

TEST(SupportGraph, LinesAndAdjacency) {
    const SupportGraph g(fixture("staircase").measure);
    EXPECT_EQ(g.x_lines().size(), 3u);
    EXPECT_EQ(g.y_lines().size(), 2u);
    EXPECT_EQ(g.neighbors(0), (std::vector<std::size_t>{1}));
    EXPECT_EQ(g.neighbors(1), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(g.components().size(), 1u);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (auto j : g.neighbors(i)) {
            const auto back = g.neighbors(j);
            EXPECT_NE(std::find(back.begin(), back.end(), i), back.end());
        }
}

TEST(AxialCycle, RectangleHasAFourCycle) {
    const auto c = find_axial_cycle(fixture("rectangle-nonunique").measure);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->points.size(), 4u);
    EXPECT_TRUE(is_valid_axial_cycle(c->points));
}

TEST(AxialCycle, ExampleAndSmallSupportsAreAcyclic) {
    EXPECT_FALSE(find_axial_cycle(fixture("staircase").measure));
    EXPECT_FALSE(find_axial_cycle(uniform({{0, 0}, {0, 1}, {1, 0}})));
    EXPECT_FALSE(find_axial_cycle(uniform({{1, 1}})));
}

TEST(AxialCycle, IndependentCheckerRejectsBrokenPatterns) {
    const std::vector<Point> good{{R(0), R(0)}, {R(1), R(0)}, {R(1), R(1)}, {R(0), R(1)}};
    EXPECT_TRUE(is_valid_axial_cycle(good));
    auto bad = good;
    std::swap(bad[1], bad[2]);
    EXPECT_FALSE(is_valid_axial_cycle(bad));
    EXPECT_FALSE(is_valid_axial_cycle({good[0], good[1], good[2]}));
    EXPECT_FALSE(is_valid_axial_cycle({good[0], good[1], good[0], good[1]}));
}

TEST(AxialPath, ExampleOrder) {
    const auto r = is_axial_path(fixture("staircase").measure);
    ASSERT_TRUE(r.is_path);
    const std::vector<Point> expected{{R(1, 8), R(1, 4)}, {R(1, 2), R(1, 4)}, {R(1, 2), R(3, 4)}, {R(7, 8), R(3, 4)}};
    EXPECT_EQ(r.path.points, expected);
    EXPECT_TRUE(is_valid_axial_path(r.path.points));
}

TEST(AxialPath, RectangleFailsWithCycleWitness) {
    const auto r = is_axial_path(fixture("rectangle-nonunique").measure);
    EXPECT_FALSE(r.is_path);
    ASSERT_TRUE(r.cycle);
    EXPECT_TRUE(is_valid_axial_cycle(r.cycle->points));
}

TEST(AxialPath, ThreeOnAVerticalLineFails) {
    const auto r = is_axial_path(uniform({{1, 0}, {1, 1}, {1, 2}}));
    EXPECT_FALSE(r.is_path);
    EXPECT_TRUE(r.crowded_line);
}

TEST(AxialPath, DisconnectedFails) {
    EXPECT_FALSE(is_axial_path(uniform({{0, 0}, {8, 8}})).is_path);
    EXPECT_TRUE(is_axial_path(uniform({{3, 3}})).is_path);
}

// Union-find detection agrees with an explicit DFS search, cycles validate,
// and paths imply acyclicity.
TEST(Property, CycleDetectionMatchesDfsOracle) {
    std::mt19937_64 rng(99);
    int cyclic = 0;
    for (int it = 0; it < 1500; ++it) {
        const auto m = random_grid_measure(rng, 3, 7);
        const auto c = find_axial_cycle(m);
        EXPECT_EQ(c.has_value(), has_axial_cycle_dfs(m)) << serialize_measure(m).dump();
        if (c) {
            ++cyclic;
            EXPECT_TRUE(is_valid_axial_cycle(c->points));
            for (std::size_t k = 0; k < c->atoms.size(); ++k) EXPECT_EQ(m[c->atoms[k]].location(), c->points[k]);
        }
        const auto p = is_axial_path(m);
        if (p.is_path) {
            EXPECT_FALSE(c);
            EXPECT_TRUE(is_valid_axial_path(p.path.points));
            EXPECT_EQ(p.path.points.size(), m.size());
        }
    }
    EXPECT_GT(cyclic, 100);
}
