#include "pirtrade/explicit_bounds.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "pirtrade/tradeoff.hpp"

namespace pirtrade {

namespace {

void require_params(int servers, int messages, int m) {
    if (servers < 2) throw std::invalid_argument("N must be >= 2");
    if (messages < 1) throw std::invalid_argument("K must be >= 1");
    if (m < 1 || m > servers) throw std::invalid_argument("m must be in [1:N]");
}

Rational n_beta0(int servers, int messages) {
    return baseline_costs({servers, messages}).beta0 * Rational(servers);
}

// (1/(j-i) - 1/(j-1)) c_i^{j-i}
Rational cross_term(const CoefficientVector& c, int i, int j) {
    return c.at(i, j - i) * (Rational(1, j - i) - Rational(1, j - 1));
}

void assert_nonnegative(const Rational& multiplier, const char* what) {
    if (multiplier.sign() < 0) throw std::logic_error(std::string("negative multiplier on ") + what);
}

std::mutex memo_mutex;
std::map<std::tuple<int, int, int>, Rational> dunderline_memo;

}  // namespace

CoefficientVector CoefficientVector::zeros(int servers, int m) {
    if (m < 1 || m > servers - 1) throw std::invalid_argument("coefficient vector needs m in [1:N-1]");
    CoefficientVector c;
    c.servers = servers;
    c.m = m;
    for (int j = 1; j <= m; ++j) c.rows.emplace_back(static_cast<std::size_t>(servers - j + 2), Rational(0));
    return c;
}

std::string CoefficientVector::str() const {
    std::string out;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j) out += ';';
        out += "c" + std::to_string(j + 1) + "=[";
        for (std::size_t n = 0; n < rows[j].size(); ++n) {
            if (n) out += ',';
            out += rows[j][n].str();
        }
        out += ']';
    }
    return out;
}

DVector d_from_c(const CoefficientVector& c) {
    const int n = c.servers;
    const int m = c.m;
    DVector d;
    d.servers = n;
    for (int j = 2; j <= n; ++j) {
        Rational v = 0;
        if (j <= m) {
            for (int i = 2; i <= j - 1; ++i) v += cross_term(c, i, j);
            v += c.at(j - 1, 0);
            for (int k = 1; k <= n - j + 1; ++k) v += Rational(k - 1, k) * c.at(j, k);
        } else {
            if (j == m + 1) v += c.at(m, 0);
            for (int i = 2; i <= m; ++i) v += cross_term(c, i, j);
        }
        d.values.push_back(std::move(v));
    }
    return d;
}

bool check_feasible(const CoefficientVector& c) {
    const int n = c.servers;
    const int m = c.m;
    if (n < 2 || m < 1 || m > n - 1 || static_cast<int>(c.rows.size()) != m) return false;
    for (int j = 1; j <= m; ++j) {
        const auto& row = c.rows[static_cast<std::size_t>(j - 1)];
        if (static_cast<int>(row.size()) != n - j + 2) return false;
        Rational sum = 0;
        for (const auto& v : row) {
            if (v.sign() < 0 || v > Rational(1)) return false;
            sum += v;
        }
        if (sum != Rational(1)) return false;
    }
    const DVector d = d_from_c(c);
    for (const auto& v : d.values)
        if (v.sign() < 0) return false;
    for (int j = 2; j <= m; ++j) {
        Rational lhs = 0, rhs = 0;
        for (int i = j; i <= n; ++i) lhs += Rational(n - i + 1) * d.at(i);
        for (int i = j; i <= m; ++i) rhs += Rational(n - i + 1);
        if (lhs < rhs) return false;
    }
    return true;
}

int jstar(int servers, int messages, int m) {
    if (messages < 2) throw std::invalid_argument("jstar needs K >= 2");
    if (m < 2 || m > servers - 1) throw std::invalid_argument("jstar needs m in [2:N-1]");
    const long n = servers;
    if (messages == 2) {
        // Smallest t >= 2 with t >= (N + 1/2) - sqrt(r + 1/4), in integers.
        const long four_r_plus_1 = 4 * (n - m) * (n + m - 1) + 1;
        for (long t = 2;; ++t) {
            const long lhs = 2 * n + 1 - 2 * t;
            if (lhs <= 0 || lhs * lhs <= four_r_plus_1) return static_cast<int>(t);
        }
    }
    const Rational target(static_cast<long>(m - 1) * (n - m), m);
    for (int j = 2; j <= m; ++j) {
        Rational sum = 0;
        for (int i = j + 1; i <= m; ++i) sum += Rational(n - i + 1, i - 1);
        if (sum <= target) return j;
    }
    return m;  // unreachable: the empty sum at j = m always qualifies
}

CoefficientVector constructed_coefficients(int servers, int messages, int m) {
    const int n = servers;
    const int js = jstar(servers, messages, m);
    auto c = CoefficientVector::zeros(servers, m);
    if (messages == 2) {
        for (int j = js; j <= m; ++j) {
            const Rational p(static_cast<long>(m - j) * (m + j - 1), 2L * (j - 1) * (n - j));
            c.at(j, 1) += p;
            c.at(j, n - j + 1) += Rational(1) - p;
        }
        const Rational q = Rational(static_cast<long>(n - js) * (js - 1), n - js + 1) *
                           (Rational(1) - Rational(static_cast<long>(m - js) * (m + js - 1),
                                                   2L * (js - 1) * (n - js)));
        c.at(js - 1, 1) = q;
        c.at(js - 1, 0) = Rational(1) - q;
    } else {
        for (int j = js; j <= m; ++j) c.at(j, 1) = 1;
        Rational bracket(static_cast<long>(n - m) * (m - 1), m);
        for (int i = js + 1; i <= m; ++i) bracket -= Rational(n - i + 1, i - 1);
        const Rational y = Rational(js, static_cast<long>(js - 1) * (n - js)) * bracket;
        const Rational xi =
            Rational(static_cast<long>(n - js) * (js - 1) * (js - 1), static_cast<long>(js) * (n - js + 1)) * y;
        c.at(js - 1, 1) = xi;
        c.at(js - 1, 0) = Rational(1) - xi;
    }
    for (int j = 1; j < js - 1; ++j) c.at(j, 0) = 1;
    return c;
}

namespace {

using TildeMemo = std::map<std::pair<int, int>, Rational>;  // (K, m) below the top level

Rational tilde_impl(int servers, int messages, int m, const CoefficientVector& c, const CoefficientProvider& inner,
                    TildeMemo& memo) {
    require_params(servers, messages, m);
    if (messages == 1) return 1;
    if (m == 1) return messages;
    if (m == servers) return n_beta0(servers, messages);
    if (c.servers != servers || c.m != m) throw std::invalid_argument("tilde_B: coefficient vector shape mismatch");
    if (!check_feasible(c)) throw std::invalid_argument("tilde_B: coefficient vector is not feasible");

    auto lower = [&](int mm) -> Rational {
        const int kk = messages - 1;
        if (kk == 1 || mm == 1 || mm == servers) return tilde_impl(servers, kk, mm, c, inner, memo);
        const auto key = std::make_pair(kk, mm);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Rational v = tilde_impl(servers, kk, mm, inner(servers, kk, mm), inner, memo);
        memo.emplace(key, v);
        return v;
    };

    Rational v = Rational(1) + c.at(1, 1) * Rational(messages - 1);
    for (int j = 2; j <= m; ++j)
        for (int k = 1; k <= servers - j + 1; ++k) {
            if (c.at(j, k).is_zero()) continue;
            v += c.at(j, k) / Rational(j + k - 1) * lower(j + k - 1);
        }
    return v;
}

}  // namespace

Rational tilde_B(int servers, int messages, int m, const CoefficientVector& c, const CoefficientProvider& inner) {
    TildeMemo memo;
    return tilde_impl(servers, messages, m, c, inner, memo);
}

Rational dunderline_closed_form(int servers, int messages, int m, int j_star) {
    if (messages < 2) throw std::invalid_argument("closed form needs K >= 2");
    const int n = servers;
    const int js = j_star;
    if (js < 2 || js > m) throw std::invalid_argument("closed form needs j* in [2:m]");
    if (messages == 2) {
        Rational v = Rational(1) + Rational(m - js + 1, n);
        for (int j = js; j <= m - 1; ++j)
            v += Rational(static_cast<long>(m - j) * (m + j - 1), 2L * j * (j - 1) * n);
        v += Rational(1, n - js + 1) *
             (Rational(n - js) - Rational(static_cast<long>(m - js) * (m + js - 1), 2L * (js - 1)));
        return v;
    }
    Rational v = 1;
    for (int j = js; j <= m; ++j) v += Rational(1, j) * dunderline_B(n, messages - 1, j);
    Rational bracket(static_cast<long>(n - m) * (m - 1), m);
    for (int i = js + 1; i <= m; ++i) bracket -= Rational(n - i + 1, i - 1);
    v += Rational(1, n - js + 1) * bracket * dunderline_B(n, messages - 1, js - 1);
    return v;
}

Rational dunderline_B(int servers, int messages, int m) {
    require_params(servers, messages, m);
    if (messages == 1) return 1;
    if (m == 1) return messages;
    if (m == servers) return n_beta0(servers, messages);
    const auto key = std::make_tuple(servers, messages, m);
    {
        std::lock_guard lock(memo_mutex);
        if (auto it = dunderline_memo.find(key); it != dunderline_memo.end()) return it->second;
    }
    Rational v = dunderline_closed_form(servers, messages, m, jstar(servers, messages, m));
    std::lock_guard lock(memo_mutex);
    return dunderline_memo.emplace(key, std::move(v)).first->second;
}

BoundResult dunderline_result(int servers, int messages, int m) {
    BoundResult r;
    r.kind = BoundKind::Dunderline;
    r.servers = servers;
    r.messages = messages;
    r.m = m;
    r.alpha_weight = servers - m;
    r.beta_weight = m;
    r.value = dunderline_B(servers, messages, m);
    if (messages == 1)
        r.provenance = "boundary K=1";
    else if (m == 1)
        r.provenance = "boundary m=1";
    else if (m == servers)
        r.provenance = "boundary m=N";
    else
        r.provenance = "closed form j*=" + std::to_string(jstar(servers, messages, m));
    return r;
}

Rational flat_weight(int servers, int messages, int k) {
    return Rational(servers - 1) + Rational(servers - 2) * Rational::pow(servers, messages - k);
}

BoundResult flat_bound(int servers, int messages, int k) {
    if (servers < 2) throw std::invalid_argument("flat_bound needs N >= 2");
    if (messages < 2) throw std::invalid_argument("flat_bound needs K >= 2");
    if (k < 1 || k > messages) throw std::invalid_argument("flat_bound needs k in [1:K]");
    const Rational n(servers);
    const int kk = messages;
    const Rational n_km1 = Rational::pow(n, k - 1);
    const Rational n_Kk = Rational::pow(n, kk - k);
    auto b_minus_1 = [&](int kprime) { return dunderline_B(servers, kprime, servers - 1) - Rational(1); };

    const Rational bracket = (n_Kk - 1) * (n - 2) / (n * (n - 1)) + Rational(kk - k);
    Rational v;
    std::string which;
    if (2 * k <= kk) {
        which = "k<=K/2";
        v = Rational(k) + Rational::pow(n, kk - 2 * k) * (Rational::pow(n, k) - 1) * (n - 2) / (n - 1);
        v += bracket / n_km1;
        const Rational mult = Rational(1) - Rational(1) / n_km1;
        assert_nonnegative(mult, "B(K-k+1,N-1)");
        v += mult * b_minus_1(kk - k + 1);
    } else {
        which = "k>K/2";
        const Rational n_2kK = Rational::pow(n, 2 * k - kk);
        v = Rational(kk - k) + (n - 2) * (n_Kk - 1) / (n - 1);
        v += Rational(2) * (n_2kK - 1) / n_2kK;
        for (int i = 1; i <= 2 * k - kk - 1; ++i) {
            const Rational mult = (n - 1) / Rational::pow(n, i);
            assert_nonnegative(mult, "B(k-i+1,N-1)");
            v += mult * b_minus_1(k - i + 1);
        }
        v += bracket / n_km1;
        const Rational mult = (n_Kk - 1) / n_km1;
        assert_nonnegative(mult, "B(K-k+1,N-1)");
        v += mult * b_minus_1(kk - k + 1);
    }

    BoundResult r;
    r.kind = BoundKind::Flat;
    r.servers = servers;
    r.messages = messages;
    r.k = k;
    r.alpha_weight = 1;
    r.beta_weight = flat_weight(servers, messages, k);
    r.value = std::move(v);
    r.provenance = "flat bound k=" + std::to_string(k) + " (" + which + ")";
    return r;
}

std::vector<HalfPlane> lower_bound_halfplanes(int servers, int messages) {
    if (servers < 2) throw std::invalid_argument("lower_bound_halfplanes needs N >= 2");
    if (messages < 2) throw std::invalid_argument("lower_bound_halfplanes needs K >= 2");
    std::vector<HalfPlane> out;
    for (int m = 1; m <= servers; ++m) {
        const auto r = dunderline_result(servers, messages, m);
        out.emplace_back(r.alpha_weight, r.beta_weight, r.value, "dunderline(m=" + std::to_string(m) + ")");
    }
    for (int k = 1; k <= messages; ++k) {
        const auto r = flat_bound(servers, messages, k);
        out.emplace_back(r.alpha_weight, r.beta_weight, r.value, "flat(k=" + std::to_string(k) + ")");
    }
    out.emplace_back(Rational(1), Rational(0), baseline_costs({servers, messages}).alpha0, "alpha0");
    return out;
}

}  // namespace pirtrade
