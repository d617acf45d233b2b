#include "pirtrade/entropic_lp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pirtrade {

std::string VarId::name() const {
    return std::string(side == Side::X ? "x" : "y") + "_" + std::to_string(k) + "_" + std::to_string(a) + "_" +
           std::to_string(b);
}

int LpProblem::index_of(const VarId& v) const {
    const auto it = std::lower_bound(variables.begin(), variables.end(), v);
    if (it == variables.end() || *it != v) return -1;
    return static_cast<int>(it - variables.begin());
}

LinearProgram LpProblem::lower() const {
    LinearProgram out;
    out.columns = static_cast<int>(variables.size());
    auto column = [&](const VarId& v) {
        const int j = index_of(v);
        if (j < 0) throw std::invalid_argument("LpProblem: unknown variable " + v.name());
        return j;
    };
    for (const auto& c : constraints) {
        SparseRow row;
        for (const auto& [v, a] : c.terms) row.terms.emplace_back(column(v), a);
        row.sense = c.sense == Sense::Equal ? RowSense::Equal : RowSense::GreaterEqual;
        row.rhs = c.rhs;
        out.rows.push_back(std::move(row));
    }
    for (const auto& [v, a] : objective) out.objective.emplace_back(column(v), a);
    return out;
}

std::vector<VarId> variable_census(int servers, int messages) {
    std::vector<VarId> out;
    for (Side side : {Side::X, Side::Y})
        for (int k = 1; k <= messages; ++k)
            for (int a = 0; a <= servers; ++a)
                for (int b = 0; a + b <= servers; ++b) out.push_back({side, k, a, b});
    std::sort(out.begin(), out.end());
    return out;
}

SubmodularTuple canonical_tuple(const SubmodularTuple& t) {
    const auto [a, b, c, d, e, f, g, h] = t;
    const SubmodularTuple swapped{a, d, g, b, e, h, c, f};
    return std::min(t, swapped);
}

std::array<std::pair<int, int>, 4> submodular_arguments(const SubmodularTuple& t) {
    const auto [a, b, c, d, e, f, g, h] = t;
    return {{{a + b + c, d + e + f}, {a + g + d, b + e + h}, {a + b + c + d + g, e + f + h}, {a, b + d + e}}};
}

namespace {

void add_term(std::vector<std::pair<VarId, Rational>>& terms, const VarId& v, const Rational& c) {
    for (auto& [u, a] : terms) {
        if (u == v) {
            a += c;
            return;
        }
    }
    terms.emplace_back(v, c);
}

void drop_zero_terms(LinearConstraint& c) {
    std::erase_if(c.terms, [](const auto& t) { return t.second.is_zero(); });
}

template <class Fn>
void for_each_tuple(int servers, Fn&& fn) {
    SubmodularTuple t{};
    // Odometer over 8 digits with running sum <= servers.
    for (;;) {
        fn(t);
        int i = 7;
        for (; i >= 0; --i) {
            ++t[static_cast<std::size_t>(i)];
            int sum = 0;
            for (int v : t) sum += v;
            if (sum <= servers) break;
            t[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) return;
    }
}

}  // namespace

std::vector<LinearConstraint> enumerate_submodular(int servers, int messages, bool canonicalize) {
    if (servers < 2) throw std::invalid_argument("enumerate_submodular: N must be >= 2");
    std::vector<SubmodularTuple> tuples;
    for_each_tuple(servers, [&](const SubmodularTuple& t) {
        if (!canonicalize || canonical_tuple(t) == t) tuples.push_back(t);
    });

    std::vector<LinearConstraint> out;
    for (Side side : {Side::X, Side::Y}) {
        const int k_hi = side == Side::X ? messages - 1 : messages;
        for (int k = 1; k <= k_hi; ++k) {
            for (const auto& t : tuples) {
                const auto args = submodular_arguments(t);
                LinearConstraint c;
                c.tag = "submodular";
                for (int i = 0; i < 4; ++i)
                    add_term(c.terms, {side, k, args[static_cast<std::size_t>(i)].first,
                                       args[static_cast<std::size_t>(i)].second},
                             Rational(i < 2 ? 1 : -1));
                drop_zero_terms(c);
                if (c.terms.empty()) continue;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

std::vector<LinearConstraint> enumerate_structural(int servers, int messages) {
    if (servers < 2) throw std::invalid_argument("enumerate_structural: N must be >= 2");
    if (messages < 1) throw std::invalid_argument("enumerate_structural: K must be >= 1");
    const int n = servers;
    const int kk = messages;
    std::vector<LinearConstraint> out;
    auto ge = [&](std::vector<std::pair<VarId, Rational>> terms, Rational rhs, const char* tag) {
        out.push_back({std::move(terms), Sense::GreaterEqual, std::move(rhs), tag});
    };
    auto eq = [&](std::vector<std::pair<VarId, Rational>> terms, Rational rhs, const char* tag) {
        out.push_back({std::move(terms), Sense::Equal, std::move(rhs), tag});
    };

    for (Side side : {Side::X, Side::Y}) {
        const int k_hi = side == Side::X ? kk - 1 : kk;
        for (int k = 1; k <= k_hi; ++k)
            for (int a = 0; a <= n - 1; ++a)
                for (int b = 1; b <= n - a; ++b)
                    ge({{{side, k, a, b}, 1}, {{side, k, a, b - 1}, -1}}, 0, "monotone");
    }
    for (int k = 1; k <= kk; ++k)
        for (int a = 0; a <= n - 1; ++a)
            ge({{{Side::Y, k, a, n - a}, 1}, {{Side::X, k, a, n - a}, -1}}, 1, "decodable");
    for (int k = 1; k <= kk; ++k)
        for (int b = 1; b <= n - 1; ++b)
            ge({{{Side::Y, k, 0, b}, 1}, {{Side::Y, k, 0, n}, Rational(-b, n)}}, 0, "han");
    for (int k = 1; k <= kk - 1; ++k)
        for (int a = 0; a <= n - 1; ++a)
            eq({{{Side::X, k, a, 1}, 1}, {{Side::Y, k + 1, a, 1}, -1}}, 0, "privacy");
    for (int k = 1; k <= kk - 1; ++k)
        for (int a = 1; a <= n; ++a)
            eq({{{Side::X, k, a, 0}, 1}, {{Side::Y, k + 1, a, 0}, -1}}, 0, "invariance");
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) eq({{{Side::X, kk, a, b}, 1}}, 0, "boundary");
    for (const auto& v : variable_census(n, kk)) ge({{v, 1}}, 0, "nonnegative");
    return out;
}

LpProblem build_lp(int servers, int messages, const Rational& a0, const Rational& b0, bool canonicalize) {
    if (a0.sign() < 0 || b0.sign() < 0) throw std::invalid_argument("build_lp: weights must be nonnegative");
    if (a0.is_zero() && b0.is_zero()) throw std::invalid_argument("build_lp: weights must not both be zero");

    LpProblem lp;
    lp.servers = servers;
    lp.messages = messages;
    for (const auto& v : variable_census(servers, messages))
        if (!(v.side == Side::X && v.k == messages)) lp.variables.push_back(v);

    auto boundary = [&](const VarId& v) { return v.side == Side::X && v.k == messages; };
    auto take = [&](std::vector<LinearConstraint> rows) {
        for (auto& c : rows) {
            std::erase_if(c.terms, [&](const auto& t) { return boundary(t.first); });
            if (c.terms.empty()) continue;  // boundary rows and x_K >= 0
            lp.constraints.push_back(std::move(c));
        }
    };
    take(enumerate_submodular(servers, messages, canonicalize));
    take(enumerate_structural(servers, messages));

    if (!a0.is_zero()) lp.objective.emplace_back(VarId{Side::Y, 1, 1, 0}, a0);
    if (!b0.is_zero()) lp.objective.emplace_back(VarId{Side::Y, 1, 0, 1}, b0);
    return lp;
}

LpSolution solve_exact(const LpProblem& lp, const SimplexOptions& opts) {
    const auto res = solve_linear_program(lp.lower(), opts);
    LpSolution out;
    out.status = res.status;
    out.stats = res.stats;
    if (res.status == LpStatus::Optimal) {
        out.value = res.value;
        for (std::size_t j = 0; j < lp.variables.size(); ++j) out.assignment[lp.variables[j]] = res.primal[j];
    }
    return out;
}

Rational lp_bound(int servers, int messages, const Rational& a0, const Rational& b0) {
    const auto sol = solve_exact(build_lp(servers, messages, a0, b0));
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("entropic LP is " + to_string(sol.status));
    return sol.value;
}

std::string lp_text(const LpProblem& lp) {
    std::ostringstream out;
    auto expr = [&](const std::vector<std::pair<VarId, Rational>>& terms) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& [v, a] = terms[i];
            if (a.sign() < 0)
                out << " - ";
            else if (i > 0)
                out << " + ";
            else
                out << ' ';
            out << a.abs().str() << ' ' << v.name();
        }
    };
    out << "\\ entropic LP N=" << lp.servers << " K=" << lp.messages << "\n";
    out << "Minimize\n obj:";
    expr(lp.objective);
    out << "\nSubject To\n";
    std::size_t i = 0;
    for (const auto& c : lp.constraints) {
        out << ' ' << c.tag << '_' << ++i << ':';
        expr(c.terms);
        out << (c.sense == Sense::Equal ? " = " : " >= ") << c.rhs.str() << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : lp.variables) out << ' ' << v.name() << " >= 0\n";
    out << "End\n";
    return out.str();
}

}  // namespace pirtrade
