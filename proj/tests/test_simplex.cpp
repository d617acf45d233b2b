#include <doctest.h>

#include <optional>

#include "oracle.hpp"
#include "pirtrade/simplex.hpp"

using namespace pirtrade;
using oracle::Q;

namespace {

struct DenseRow {
    std::vector<Q> a;
    bool equal = false;
    Q rhs;
};

// Solves the square system rows[i].a . x = rows[i].rhs; nullopt if singular.
std::optional<std::vector<Q>> solve_square(std::vector<DenseRow> rows, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (rows[r].a[col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(rows[col], rows[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == col || rows[r].a[col] == 0) continue;
            const Q f = rows[r].a[col] / rows[col].a[col];
            for (int c = 0; c < n; ++c) rows[r].a[c] -= f * rows[col].a[c];
            rows[r].rhs -= f * rows[col].rhs;
        }
    }
    std::vector<Q> x(n);
    for (int i = 0; i < n; ++i) x[i] = rows[i].rhs / rows[i].a[i];
    return x;
}

// Minimum over basic feasible points; the feasible region is bounded by
// construction so this is the optimum, or nullopt when infeasible.
std::optional<Q> brute_force(const std::vector<DenseRow>& rows, const std::vector<Q>& cost, int n) {
    std::vector<DenseRow> all = rows;
    for (int j = 0; j < n; ++j) {
        DenseRow r;
        r.a.assign(n, 0);
        r.a[j] = 1;
        r.rhs = 0;
        all.push_back(r);
    }
    const int m = static_cast<int>(all.size());
    std::optional<Q> best;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) != n) continue;
        std::vector<DenseRow> pick;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u) pick.push_back(all[i]);
        auto x = solve_square(pick, n);
        if (!x) continue;
        bool ok = true;
        for (const auto& r : all) {
            Q lhs = 0;
            for (int j = 0; j < n; ++j) lhs += r.a[j] * (*x)[j];
            if (r.equal ? lhs != r.rhs : lhs < r.rhs) ok = false;
        }
        if (!ok) continue;
        Q v = 0;
        for (int j = 0; j < n; ++j) v += cost[j] * (*x)[j];
        if (!best || v < *best) best = v;
    }
    return best;
}

Rational to_rational(const Q& v) {
    return Rational::parse(oracle::str(v));
}

}  // namespace

TEST_CASE("simplex matches vertex enumeration on random bounded programs") {
    auto gen = oracle::rng(7);
    std::uniform_int_distribution<int> coef(-4, 4), nvars(1, 4), nrows(1, 5), small(0, 9);
    int optimal = 0, infeasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = nvars(gen);
        const int m = nrows(gen);
        std::vector<DenseRow> rows;
        for (int i = 0; i < m; ++i) {
            DenseRow r;
            r.a.resize(n);
            for (auto& v : r.a) v = coef(gen);
            r.rhs = coef(gen);
            r.equal = small(gen) < 2;
            rows.push_back(r);
        }
        if (n >= 2 && small(gen) < 3) {
            // x_0 = c x_1 style row to exercise the substitution presolve
            DenseRow r;
            r.a.assign(n, 0);
            r.a[0] = 1 + small(gen) % 3;
            r.a[1] = -(1 + small(gen) % 4);
            r.rhs = 0;
            r.equal = true;
            rows.push_back(r);
        }
        DenseRow cap;  // sum x <= 20 keeps every instance bounded
        cap.a.assign(n, -1);
        cap.rhs = -20;
        rows.push_back(cap);

        std::vector<Q> cost(n);
        for (auto& c : cost) c = coef(gen);

        LinearProgram lp;
        lp.columns = n;
        for (const auto& r : rows) {
            SparseRow s;
            for (int j = 0; j < n; ++j)
                if (r.a[j] != 0) s.terms.emplace_back(j, to_rational(r.a[j]));
            s.sense = r.equal ? RowSense::Equal : RowSense::GreaterEqual;
            s.rhs = to_rational(r.rhs);
            lp.rows.push_back(s);
        }
        for (int j = 0; j < n; ++j)
            if (cost[j] != 0) lp.objective.emplace_back(j, to_rational(cost[j]));

        const auto want = brute_force(rows, cost, n);
        for (auto rule : {PivotRule::Bland, PivotRule::DantzigThenBland}) {
            SimplexOptions opts;
            opts.rule = rule;
            const auto got = solve_linear_program(lp, opts);
            if (!want) {
                CHECK(got.status == LpStatus::Infeasible);
                continue;
            }
            REQUIRE(got.status == LpStatus::Optimal);
            CHECK(oracle::same(got.value, *want));
            CHECK(satisfies(lp, got.primal));
            CHECK(objective_value(lp, got.primal) == got.value);
        }
        if (want) ++optimal; else ++infeasible;
    }
    CHECK(optimal > 50);
    CHECK(infeasible > 10);
}

TEST_CASE("simplex edge cases") {
    SUBCASE("unbounded") {
        LinearProgram lp;
        lp.columns = 2;
        lp.rows.push_back({{{0, Rational(1)}, {1, Rational(-1)}}, RowSense::GreaterEqual, Rational(1)});
        lp.objective = {{1, Rational(-1)}};
        CHECK(solve_linear_program(lp).status == LpStatus::Unbounded);
    }
    SUBCASE("infeasible equality") {
        LinearProgram lp;
        lp.columns = 1;
        lp.rows.push_back({{{0, Rational(1)}}, RowSense::Equal, Rational(-1)});
        CHECK(solve_linear_program(lp).status == LpStatus::Infeasible);
    }
    SUBCASE("no rows") {
        LinearProgram lp;
        lp.columns = 3;
        lp.objective = {{0, Rational(2)}};
        const auto r = solve_linear_program(lp);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.value == Rational(0));
        CHECK(r.primal.size() == 3);
    }
    SUBCASE("fractional optimum") {
        // min x + y s.t. 3x + y >= 2, x + 3y >= 2  ->  x = y = 1/2
        LinearProgram lp;
        lp.columns = 2;
        lp.rows.push_back({{{0, Rational(3)}, {1, Rational(1)}}, RowSense::GreaterEqual, Rational(2)});
        lp.rows.push_back({{{0, Rational(1)}, {1, Rational(3)}}, RowSense::GreaterEqual, Rational(2)});
        lp.objective = {{0, Rational(1)}, {1, Rational(1)}};
        const auto r = solve_linear_program(lp);
        CHECK(r.value == Rational(1));
        CHECK(r.primal[0] == Rational(1, 2));
        CHECK(r.primal[1] == Rational(1, 2));
    }
    SUBCASE("substitution chain") {
        // x0 = 2 x1, x1 = 3 x2, x2 >= 1/6, min x0
        LinearProgram lp;
        lp.columns = 3;
        lp.rows.push_back({{{0, Rational(1)}, {1, Rational(-2)}}, RowSense::Equal, Rational(0)});
        lp.rows.push_back({{{1, Rational(1)}, {2, Rational(-3)}}, RowSense::Equal, Rational(0)});
        lp.rows.push_back({{{2, Rational(1)}}, RowSense::GreaterEqual, Rational(1, 6)});
        lp.objective = {{0, Rational(1)}};
        const auto r = solve_linear_program(lp);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.value == Rational(1));
        CHECK(r.primal[2] == Rational(1, 6));
        CHECK(r.stats.columns_after_presolve < r.stats.columns_in);
    }
    SUBCASE("pivot limit") {
        LinearProgram lp;
        lp.columns = 2;
        lp.rows.push_back({{{0, Rational(1)}, {1, Rational(1)}}, RowSense::GreaterEqual, Rational(1)});
        lp.objective = {{0, Rational(1)}, {1, Rational(2)}};
        SimplexOptions opts;
        opts.max_pivots = 0;
        CHECK_THROWS_AS(solve_linear_program(lp, opts), IterationLimit);
    }
    CHECK(to_string(LpStatus::Optimal) == "optimal");
}
