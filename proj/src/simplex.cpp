#include "pirtrade/simplex.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace pirtrade {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != lp.columns) return false;
    for (const auto& v : x)
        if (v.sign() < 0) return false;
    for (const auto& row : lp.rows) {
        Rational lhs = 0;
        for (const auto& [j, a] : row.terms) lhs += a * x[static_cast<std::size_t>(j)];
        if (row.sense == RowSense::Equal ? lhs != row.rhs : lhs < row.rhs) return false;
    }
    return true;
}

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& x) {
    Rational v = 0;
    for (const auto& [j, c] : lp.objective) v += c * x.at(static_cast<std::size_t>(j));
    return v;
}

namespace {

// x_j = factor_j * x_{root_j}, factor_j > 0.
struct ScaledUnionFind {
    std::vector<int> parent;
    std::vector<mpq_class> factor;  // relative to parent

    explicit ScaledUnionFind(int n) : parent(static_cast<std::size_t>(n)), factor(static_cast<std::size_t>(n), 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::pair<int, mpq_class> find(int j) {
        mpq_class f = 1;
        int r = j;
        while (parent[static_cast<std::size_t>(r)] != r) {
            f *= factor[static_cast<std::size_t>(r)];
            r = parent[static_cast<std::size_t>(r)];
        }
        if (r != j) {
            parent[static_cast<std::size_t>(j)] = r;
            factor[static_cast<std::size_t>(j)] = f;
        }
        return {r, f};
    }
};

using Terms = std::vector<std::pair<int, mpq_class>>;

Terms substitute(const std::vector<std::pair<int, Rational>>& in, ScaledUnionFind& uf) {
    std::map<int, mpq_class> acc;
    for (const auto& [j, a] : in) {
        auto [r, f] = uf.find(j);
        acc[r] += a.raw() * f;
    }
    Terms out;
    for (auto& [j, a] : acc)
        if (sgn(a) != 0) out.emplace_back(j, std::move(a));
    return out;
}

struct Reduced {
    std::vector<int> column_of;   // presolved column for each root, -1 otherwise
    std::vector<Terms> le_rows;   // a.x <= b over presolved columns
    std::vector<mpq_class> le_rhs;
    std::vector<mpq_class> cost;  // maximize cost . x
    int columns = 0;
    bool infeasible = false;
};

Reduced presolve(const LinearProgram& lp, ScaledUnionFind& uf) {
    Reduced red;

    // Merge two-column homogeneous equalities until nothing changes.
    std::vector<bool> consumed(lp.rows.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < lp.rows.size(); ++i) {
            const auto& row = lp.rows[i];
            if (consumed[i] || row.sense != RowSense::Equal || !row.rhs.is_zero()) continue;
            Terms t = substitute(row.terms, uf);
            if (t.empty()) {
                consumed[i] = true;
                continue;
            }
            if (t.size() != 2 || sgn(t[0].second) == sgn(t[1].second)) continue;
            // a x_p + b x_q = 0  =>  x_p = (-b/a) x_q
            const auto [p, a] = t[0];
            const auto [q, b] = t[1];
            uf.parent[static_cast<std::size_t>(p)] = q;
            uf.factor[static_cast<std::size_t>(p)] = -b / a;
            consumed[i] = true;
            changed = true;
        }
    }

    red.column_of.assign(static_cast<std::size_t>(lp.columns), -1);
    for (int j = 0; j < lp.columns; ++j) {
        const int r = uf.find(j).first;
        if (red.column_of[static_cast<std::size_t>(r)] < 0) red.column_of[static_cast<std::size_t>(r)] = red.columns++;
    }
    auto remap = [&](Terms t) {
        for (auto& [j, a] : t) j = red.column_of[static_cast<std::size_t>(j)];
        std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        return t;
    };

    // Rows as  a.x >= r, scaled so the leading coefficient is +-1, deduplicated.
    auto key_less = [](const std::pair<Terms, mpq_class>& x, const std::pair<Terms, mpq_class>& y) {
        if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
        for (std::size_t k = 0; k < x.first.size(); ++k) {
            if (x.first[k].first != y.first[k].first) return x.first[k].first < y.first[k].first;
            const int c = cmp(x.first[k].second, y.first[k].second);
            if (c != 0) return c < 0;
        }
        return cmp(x.second, y.second) < 0;
    };
    std::vector<std::pair<Terms, mpq_class>> ge_rows;
    auto add_ge = [&](Terms t, mpq_class r) {
        if (t.empty()) {
            if (sgn(r) > 0) red.infeasible = true;
            return;
        }
        const bool all_nonneg = std::all_of(t.begin(), t.end(), [](const auto& e) { return sgn(e.second) > 0; });
        if (all_nonneg && sgn(r) <= 0) return;  // implied by x >= 0
        const mpq_class lead = abs(t.front().second);
        for (auto& [j, a] : t) a /= lead;
        r /= lead;
        ge_rows.emplace_back(std::move(t), std::move(r));
    };
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        if (consumed[i]) continue;
        const auto& row = lp.rows[i];
        Terms t = remap(substitute(row.terms, uf));
        add_ge(t, row.rhs.raw());
        if (row.sense == RowSense::Equal) {
            for (auto& [j, a] : t) a = -a;
            add_ge(std::move(t), -row.rhs.raw());
        }
    }
    std::sort(ge_rows.begin(), ge_rows.end(), key_less);
    ge_rows.erase(std::unique(ge_rows.begin(), ge_rows.end(),
                              [&](const auto& x, const auto& y) { return !key_less(x, y) && !key_less(y, x); }),
                  ge_rows.end());

    for (auto& [t, r] : ge_rows) {
        for (auto& [j, a] : t) a = -a;
        red.le_rows.push_back(std::move(t));
        red.le_rhs.push_back(-r);
    }

    red.cost.assign(static_cast<std::size_t>(red.columns), 0);
    for (const auto& [j, c] : lp.objective) {
        auto [r, f] = uf.find(j);
        red.cost[static_cast<std::size_t>(red.column_of[static_cast<std::size_t>(r)])] -= c.raw() * f;
    }
    return red;
}

// Dictionary tableau: maximize c.x s.t. A x <= b, x >= 0, with one artificial
// column for phase 1.
class Tableau {
public:
    Tableau(const Reduced& red, const SimplexOptions& opts, SimplexStats& stats)
        : m_(static_cast<int>(red.le_rows.size())), n_(red.columns), opts_(opts), stats_(stats),
          basis_(static_cast<std::size_t>(m_)), nonbasis_(static_cast<std::size_t>(n_ + 1)),
          d_(static_cast<std::size_t>(m_ + 2), std::vector<mpq_class>(static_cast<std::size_t>(n_ + 2))) {
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, a] : red.le_rows[static_cast<std::size_t>(i)]) at(i, j) = a;
            basis_[static_cast<std::size_t>(i)] = n_ + i;
            at(i, n_) = -1;
            at(i, n_ + 1) = red.le_rhs[static_cast<std::size_t>(i)];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasis_[static_cast<std::size_t>(j)] = j;
            at(m_, j) = -red.cost[static_cast<std::size_t>(j)];
        }
        nonbasis_[static_cast<std::size_t>(n_)] = -1;
        at(m_ + 1, n_) = 1;
    }

    LpStatus solve(std::vector<mpq_class>& x, mpq_class& value) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
        if (m_ > 0 && sgn(at(r, n_ + 1)) < 0) {
            pivot(r, n_);
            if (!run(2) || sgn(at(m_ + 1, n_ + 1)) < 0) return LpStatus::Infeasible;
            for (int i = 0; i < m_; ++i) {
                if (basis_[static_cast<std::size_t>(i)] != -1) continue;
                int s = -1;
                for (int j = 0; j <= n_; ++j)
                    if (sgn(at(i, j)) != 0 && (s == -1 || nonbasis_[static_cast<std::size_t>(j)] <
                                                              nonbasis_[static_cast<std::size_t>(s)]))
                        s = j;
                if (s >= 0) pivot(i, s);  // else redundant row, artificial stays at 0
            }
        }
        if (!run(1)) return LpStatus::Unbounded;
        x.assign(static_cast<std::size_t>(n_), 0);
        for (int i = 0; i < m_; ++i) {
            const int b = basis_[static_cast<std::size_t>(i)];
            if (b >= 0 && b < n_) x[static_cast<std::size_t>(b)] = at(i, n_ + 1);
        }
        value = at(m_, n_ + 1);
        return LpStatus::Optimal;
    }

private:
    mpq_class& at(int i, int j) { return d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    void pivot(int r, int s) {
        ++stats_.pivots;
        auto& prow = d_[static_cast<std::size_t>(r)];
        const mpq_class inv = 1 / prow[static_cast<std::size_t>(s)];
        std::vector<int> nz;
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s && sgn(prow[static_cast<std::size_t>(j)]) != 0) nz.push_back(j);
        mpq_class coef, tmp;
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            auto& row = d_[static_cast<std::size_t>(i)];
            auto& e = row[static_cast<std::size_t>(s)];
            if (sgn(e) == 0) continue;
            mpq_mul(coef.get_mpq_t(), e.get_mpq_t(), inv.get_mpq_t());
            for (int j : nz) {
                mpq_mul(tmp.get_mpq_t(), prow[static_cast<std::size_t>(j)].get_mpq_t(), coef.get_mpq_t());
                mpq_sub(row[static_cast<std::size_t>(j)].get_mpq_t(), row[static_cast<std::size_t>(j)].get_mpq_t(),
                        tmp.get_mpq_t());
            }
            mpq_neg(e.get_mpq_t(), coef.get_mpq_t());
        }
        for (int j : nz) prow[static_cast<std::size_t>(j)] *= inv;
        prow[static_cast<std::size_t>(s)] = inv;
        std::swap(basis_[static_cast<std::size_t>(r)], nonbasis_[static_cast<std::size_t>(s)]);
    }

    bool run(int phase) {
        const int obj = m_ + phase - 1;
        bool bland = opts_.rule == PivotRule::Bland;
        int degenerate_run = 0;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (nonbasis_[static_cast<std::size_t>(j)] == -phase) continue;
                if (sgn(at(obj, j)) >= 0) continue;
                if (s == -1) {
                    s = j;
                    continue;
                }
                if (bland) {
                    if (nonbasis_[static_cast<std::size_t>(j)] < nonbasis_[static_cast<std::size_t>(s)]) s = j;
                } else {
                    const int c = cmp(at(obj, j), at(obj, s));
                    if (c < 0 || (c == 0 && nonbasis_[static_cast<std::size_t>(j)] <
                                                nonbasis_[static_cast<std::size_t>(s)]))
                        s = j;
                }
            }
            if (s == -1) return true;

            int r = -1;
            mpq_class best, ratio;
            for (int i = 0; i < m_; ++i) {
                if (sgn(at(i, s)) <= 0) continue;
                ratio = at(i, n_ + 1) / at(i, s);
                if (r == -1) {
                    r = i;
                    best = ratio;
                    continue;
                }
                const int c = cmp(ratio, best);
                if (c < 0 || (c == 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1) return false;

            if (sgn(best) == 0) {
                ++stats_.degenerate_pivots;
                if (++degenerate_run >= opts_.degenerate_run_limit) bland = true;
            } else {
                degenerate_run = 0;
            }
            if (stats_.pivots >= opts_.max_pivots)
                throw IterationLimit("simplex: pivot limit " + std::to_string(opts_.max_pivots) + " reached");
            pivot(r, s);
        }
    }

    int m_;
    int n_;
    const SimplexOptions& opts_;
    SimplexStats& stats_;
    std::vector<int> basis_;
    std::vector<int> nonbasis_;
    std::vector<std::vector<mpq_class>> d_;
};

}  // namespace

SimplexResult solve_linear_program(const LinearProgram& lp, const SimplexOptions& opts) {
    for (const auto& row : lp.rows)
        for (const auto& [j, a] : row.terms)
            if (j < 0 || j >= lp.columns) throw std::invalid_argument("LinearProgram: row references unknown column");
    for (const auto& [j, c] : lp.objective)
        if (j < 0 || j >= lp.columns) throw std::invalid_argument("LinearProgram: objective references unknown column");

    SimplexResult res;
    res.stats.rows_in = lp.rows.size();
    res.stats.columns_in = lp.columns;

    ScaledUnionFind uf(lp.columns);
    const Reduced red = presolve(lp, uf);
    res.stats.rows_after_presolve = red.le_rows.size();
    res.stats.columns_after_presolve = red.columns;
    if (red.infeasible) {
        res.status = LpStatus::Infeasible;
        return res;
    }

    Tableau tab(red, opts, res.stats);
    std::vector<mpq_class> x;
    mpq_class value;
    res.status = tab.solve(x, value);
    if (res.status != LpStatus::Optimal) return res;

    res.primal.resize(static_cast<std::size_t>(lp.columns));
    for (int j = 0; j < lp.columns; ++j) {
        auto [r, f] = uf.find(j);
        res.primal[static_cast<std::size_t>(j)] =
            Rational(mpq_class(x[static_cast<std::size_t>(red.column_of[static_cast<std::size_t>(r)])] * f));
    }
    res.value = objective_value(lp, res.primal);
    if (res.value != Rational(mpq_class(-value)))
        throw std::logic_error("simplex: tableau value disagrees with primal objective");
    if (!satisfies(lp, res.primal)) throw std::logic_error("simplex: primal certificate violates a row");
    return res;
}

}  // namespace pirtrade
