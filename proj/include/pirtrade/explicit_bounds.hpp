#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pirtrade/envelope.hpp"
#include "pirtrade/rational.hpp"

namespace pirtrade {

/// c_j^n for j in [1:m], n in [0:N-j+1].
struct CoefficientVector {
    int servers = 0;
    int m = 0;
    std::vector<std::vector<Rational>> rows;  // rows[j-1][n]

    static CoefficientVector zeros(int servers, int m);

    Rational& at(int j, int n) { return rows.at(static_cast<std::size_t>(j - 1)).at(static_cast<std::size_t>(n)); }
    const Rational& at(int j, int n) const {
        return rows.at(static_cast<std::size_t>(j - 1)).at(static_cast<std::size_t>(n));
    }
    std::string str() const;  // "c1=[1/2,1/2,0,0];c2=[0,0,1]"
};

/// d_j for j in [2:N].
struct DVector {
    int servers = 0;
    std::vector<Rational> values;  // values[j-2]

    const Rational& at(int j) const { return values.at(static_cast<std::size_t>(j - 2)); }
};

enum class BoundKind { Tilde, Dunderline, Flat };

struct BoundResult {
    BoundKind kind = BoundKind::Dunderline;
    int servers = 0;
    int messages = 0;
    int m = 0;  // (N-m)alpha + m beta; 0 for flat bounds
    int k = 0;  // flat bounds only
    Rational alpha_weight;
    Rational beta_weight;
    Rational value;
    std::string provenance;
};

DVector d_from_c(const CoefficientVector& c);

/// Row sums, entry range, d_j >= 0 and the subset-entropy condition.
bool check_feasible(const CoefficientVector& c);

using CoefficientProvider = std::function<CoefficientVector(int servers, int messages, int m)>;

CoefficientVector constructed_coefficients(int servers, int messages, int m);

/// Recursive bound. `c` is used at the top level; each inner (K', m') that
/// is not a boundary case takes its vector from `inner`.
Rational tilde_B(int servers, int messages, int m, const CoefficientVector& c,
                 const CoefficientProvider& inner = constructed_coefficients);

int jstar(int servers, int messages, int m);

/// Closed form with boundary cases taking precedence.
Rational dunderline_B(int servers, int messages, int m);

/// The closed form alone, with j* supplied (no boundary override at m).
/// Inner levels still go through dunderline_B.
Rational dunderline_closed_form(int servers, int messages, int m, int j_star);

/// Beta weight (N-1) + (N-2) N^(K-k) of the k-th flat bound.
Rational flat_weight(int servers, int messages, int k);

/// alpha + m_k beta >= value.
BoundResult flat_bound(int servers, int messages, int k);

BoundResult dunderline_result(int servers, int messages, int m);

/// (N-m)alpha + m beta >= dunderline for m in [1:N], the K flat bounds, and
/// alpha >= alpha0.
std::vector<HalfPlane> lower_bound_halfplanes(int servers, int messages);

}  // namespace pirtrade
