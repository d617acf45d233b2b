#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pirtrade/rational.hpp"

namespace pirtrade {

enum class RowSense { GreaterEqual, Equal };

struct SparseRow {
    std::vector<std::pair<int, Rational>> terms;  // (column, coefficient)
    RowSense sense = RowSense::GreaterEqual;
    Rational rhs;
};

/// minimize objective . x  subject to rows, x >= 0 (implicit on every column).
struct LinearProgram {
    int columns = 0;
    std::vector<SparseRow> rows;
    std::vector<std::pair<int, Rational>> objective;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

struct SimplexStats {
    std::size_t rows_in = 0;
    std::size_t rows_after_presolve = 0;
    int columns_in = 0;
    int columns_after_presolve = 0;
    std::uint64_t pivots = 0;
    std::uint64_t degenerate_pivots = 0;
};

struct SimplexResult {
    LpStatus status = LpStatus::Infeasible;
    Rational value;                 // meaningful when Optimal
    std::vector<Rational> primal;   // one entry per column when Optimal
    SimplexStats stats;
};

enum class PivotRule {
    Bland,
    /// Most negative reduced cost; switches to Bland after a run of
    /// degenerate pivots and stays there.
    DantzigThenBland,
};

struct SimplexOptions {
    PivotRule rule = PivotRule::Bland;
    std::uint64_t max_pivots = 5'000'000;
    int degenerate_run_limit = 50;
};

class IterationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact two-phase dictionary simplex over GMP rationals. Two-variable
/// homogeneous equalities with opposite signs are substituted away first.
/// An optimal primal is re-checked against every input row before return;
/// a failed check throws std::logic_error.
SimplexResult solve_linear_program(const LinearProgram& lp, const SimplexOptions& opts = {});

/// True iff x >= 0 and x satisfies every row exactly.
bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x);

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& x);

}  // namespace pirtrade
