#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "pirtrade/rational.hpp"
#include "pirtrade/simplex.hpp"

namespace pirtrade {

enum class Side { X, Y };

/// x_k(a,b) or y_k(a,b): normalized joint entropy of a stored contents and b
/// answers for message k, conditioned on the first k (X) or k-1 (Y) messages.
struct VarId {
    Side side = Side::Y;
    int k = 1;
    int a = 0;
    int b = 0;

    std::string name() const;  // "x_2_1_0"
    friend auto operator<=>(const VarId&, const VarId&) = default;
};

enum class Sense { GreaterEqual, Equal };

struct LinearConstraint {
    std::vector<std::pair<VarId, Rational>> terms;
    Sense sense = Sense::GreaterEqual;
    Rational rhs;
    std::string tag;
};

struct LpProblem {
    int servers = 0;
    int messages = 0;
    std::vector<VarId> variables;  // sorted; x_K(.,.) excluded, it is identically 0
    std::vector<LinearConstraint> constraints;
    std::vector<std::pair<VarId, Rational>> objective;  // minimized

    int index_of(const VarId& v) const;  // -1 if absent
    /// Solver form over column indices; throws on an unknown variable.
    LinearProgram lower() const;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::map<VarId, Rational> assignment;
    SimplexStats stats;
};

/// Every x_k(a,b), y_k(a,b) with k in [1:K], a + b <= N, boundary included.
std::vector<VarId> variable_census(int servers, int messages);

using SubmodularTuple = std::array<int, 8>;  // (a,b,c,d,e,f,g,h)

/// Canonical representative under (a,b,c,d,e,f,g,h) ~ (a,d,g,b,e,h,c,f).
SubmodularTuple canonical_tuple(const SubmodularTuple& t);

/// The four (a,b) arguments of the row for tuple t, in the order
/// v(p0) + v(p1) - v(p2) - v(p3) >= 0.
std::array<std::pair<int, int>, 4> submodular_arguments(const SubmodularTuple& t);

/// Submodular rows for every side and k, before boundary substitution.
/// With canonicalize=false every tuple is emitted; trivial rows are always
/// dropped.
std::vector<LinearConstraint> enumerate_submodular(int servers, int messages, bool canonicalize = true);

/// Monotone, Decodable, Han, Privacy, Invariance, Boundary and nonnegativity
/// rows, before boundary substitution.
std::vector<LinearConstraint> enumerate_structural(int servers, int messages);

/// minimize a0*y_1(1,0) + b0*y_1(0,1); x_K substituted by 0.
LpProblem build_lp(int servers, int messages, const Rational& a0, const Rational& b0, bool canonicalize = true);

LpSolution solve_exact(const LpProblem& lp, const SimplexOptions& opts = {});

/// build_lp + solve_exact; throws std::runtime_error unless optimal.
Rational lp_bound(int servers, int messages, const Rational& a0, const Rational& b0);

/// CPLEX LP text format with exact "p/q" coefficients.
std::string lp_text(const LpProblem& lp);

}  // namespace pirtrade
