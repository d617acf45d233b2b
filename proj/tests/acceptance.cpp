// Acceptance run: one PASS/FAIL line per criterion. All comparisons are
// exact rational equalities or inequalities; the only tolerance is the
// wall-clock limit printed on each line.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pirtrade/entropic_lp.hpp"
#include "pirtrade/envelope.hpp"
#include "pirtrade/explicit_bounds.hpp"
#include "pirtrade/protocol.hpp"
#include "pirtrade/tradeoff.hpp"

using namespace pirtrade;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.ok = false;
        v.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.ok && s > limit_s) {
        v.ok = false;
        v.detail = "over time limit";
    }
    if (!v.ok) ++failures;
    std::printf("%s %2d %-44s %9.3fs (limit %gs)%s%s\n", v.ok ? "PASS" : "FAIL", id, title, s, limit_s,
                v.detail.empty() ? "" : "  ", v.detail.c_str());
    std::fflush(stdout);
}

bool costs_equal(const CostReport& c, const Rational& a, const Rational& b) {
    return c.alpha_bar == a && c.beta_bar == b;
}

std::vector<TradeoffPoint> all_points(const SystemParams& p) {
    std::vector<TradeoffPoint> pts;
    for (auto* fam : {&mds_points, &uncoded_points, &gmds_points}) {
        auto v = (*fam)(p);
        pts.insert(pts.end(), v.begin(), v.end());
    }
    if (p.messages >= 2) {
        auto v = prop3_points(p);
        pts.insert(pts.end(), v.begin(), v.end());
    }
    pts.push_back(sun_jafar_point(p));
    return pts;
}

std::vector<CostReport> simulated(const SystemParams& p) {
    std::vector<CostReport> out;
    if (p.messages <= 6) {
        auto a = build_construction_a(p.messages);
        out.push_back(measure_costs(p.servers == 2 ? a : cyclic_compose(a, p.servers)));
    }
    for (int n = 2; n <= p.servers; ++n)
        if (p.messages % (n - 1) == 0) {
            auto b = build_construction_b(n, p.messages / (n - 1));
            out.push_back(measure_costs(n == p.servers ? b : cyclic_compose(b, p.servers)));
        }
    return out;
}

}  // namespace

int main() {
    criterion(1, "baseline beta0(5,3) = 31/125", 1, [](Verdict& v) {
        v.require(baseline_costs({5, 3}).beta0 == Rational(31, 125), "beta0 mismatch");
    });

    criterion(2, "construction A (K=3) = (5/2, 7/8)", 1, [](Verdict& v) {
        const auto p = build_construction_a(3);
        v.require(verify_correctness(p), "correctness");
        v.require(verify_privacy(p), "privacy");
        v.require(costs_equal(measure_costs(p), Rational(5, 2), Rational(7, 8)), "costs");
    });

    criterion(3, "construction B (N=3,T=2) = (2, 3/4)", 1, [](Verdict& v) {
        const auto p = build_construction_b(3, 2);
        v.require(verify_correctness(p), "correctness");
        v.require(verify_privacy(p), "privacy");
        v.require(costs_equal(measure_costs(p), Rational(2), Rational(3, 4)), "costs");
        const auto mds = mds_point({3, 4}, 2);
        v.require(mds.alpha == Rational(2) && Rational(3, 4) < mds.beta, "does not beat the MDS point");
    });

    criterion(4, "cyclic composition scales costs by N/M", 30, [](Verdict& v) {
        std::vector<PirProtocol> bases;
        for (int k = 1; k <= 4; ++k) bases.push_back(build_construction_a(k));
        for (int n = 2; n <= 4; ++n)
            for (int t = 1; t <= 2; ++t) bases.push_back(build_construction_b(n, t));
        for (const auto& base : bases) {
            const auto bc = measure_costs(base);
            for (int m = base.servers; m <= 7; ++m) {
                const auto cc = measure_costs(cyclic_compose(base, m));
                const Rational s(base.servers, m);
                v.require(costs_equal(cc, bc.alpha_bar * s, bc.beta_bar * s), base.name + " M=" + std::to_string(m));
            }
        }
    });

    criterion(5, "application identities", 1, [](Verdict& v) {
        for (int m = 1; m <= 8; ++m)
            for (int n = 1; n <= m; ++n)
                for (int k = 1; k <= 8; ++k) {
                    const auto sj = cyclic_transform_point(sun_jafar_point({n, k}), n, m);
                    const auto u = uncoded_point({m, k}, n);
                    v.require(sj.alpha == u.alpha && sj.beta == u.beta, "sun-jafar vs uncoded");
                    for (int t = 1; t <= n; ++t) {
                        const auto md = cyclic_transform_point(mds_point({n, k}, t), n, m);
                        const auto g = gmds_point({m, k}, t, n);
                        v.require(md.alpha == g.alpha && md.beta == g.beta, "mds vs gmds");
                    }
                }
    });

    criterion(6, "prop3(b) at T=K equals gmds(1,2)", 1, [](Verdict& v) {
        for (int n = 2; n <= 10; ++n)
            for (int k = 2; k <= 10; ++k) {
                const auto g = gmds_point({n, k}, 1, 2);
                bool seen = false;
                for (const auto& p : prop3_points({n, k}))
                    if (p.label_str() == "prop3b(T=" + std::to_string(k) + ")") {
                        seen = true;
                        v.require(p.alpha == g.alpha && p.beta == g.beta, "mismatch");
                    }
                v.require(seen, "missing prop3b(T=K)");
            }
    });

    criterion(7, "entropic LP (5,3,0,1) = 31/125, census", 600, [](Verdict& v) {
        for (int n = 2; n <= 6; ++n)
            for (int k = 1; k <= 4; ++k)
                v.require(variable_census(n, k).size() == static_cast<std::size_t>(k * (n + 1) * (n + 2)), "census");
        v.require(lp_bound(5, 3, Rational(0), Rational(1)) == Rational(31, 125), "optimum");
    });

    criterion(8, "explicit-bound boundaries and flat k=1", 1, [](Verdict& v) {
        for (int n = 2; n <= 10; ++n)
            for (int k = 1; k <= 8; ++k) {
                const auto b = baseline_costs({n, k});
                v.require(dunderline_B(n, k, 1) == Rational(k), "m=1");
                v.require(dunderline_B(n, k, n) == b.beta0 * Rational(n), "m=N");
                if (k < 2) continue;
                const Rational want = Rational(k) + Rational(n - 2) * (Rational::pow(n, k) - 1) / Rational(n * (n - 1));
                v.require(flat_bound(n, k, 1).value == want, "flat k=1");
            }
    });

    criterion(9, "coefficient constructor consistency", 10, [](Verdict& v) {
        for (int k = 2; k <= 3; ++k)
            for (int n = 3; n <= 8; ++n)
                for (int m = 2; m <= n - 1; ++m) {
                    const auto c = constructed_coefficients(n, k, m);
                    v.require(check_feasible(c), "infeasible");
                    v.require(tilde_B(n, k, m, c) == dunderline_B(n, k, m), "tilde != closed form");
                }
    });

    criterion(10, "hull >= LP >= explicit bound", 1800, [](Verdict& v) {
        for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) {
            const SystemParams p{n, k};
            const auto pts = all_points(p);
            const auto sims = simulated(p);
            for (int m = 1; m <= n; ++m) {
                const Rational wa(n - m), wb(m);
                std::optional<Rational> best;
                for (const auto& pt : pts) {
                    const Rational val = wa * pt.alpha + wb * pt.beta;
                    if (!best || val < *best) best = val;
                }
                for (const auto& c : sims) {
                    const Rational val = wa * c.alpha_bar + wb * c.beta_bar;
                    if (val < *best) best = val;
                }
                const Rational lp = lp_bound(n, k, wa, wb);
                const Rational ex = dunderline_B(n, k, m);
                const std::string at = "(" + std::to_string(n) + "," + std::to_string(k) + ") m=" + std::to_string(m);
                v.require(*best >= lp, "hull below LP at " + at);
                v.require(lp >= ex, "LP below explicit at " + at);
            }
        }
    });

    criterion(11, "soundness sweep N<=8, K<=6", 60, [](Verdict& v) {
        for (int n = 2; n <= 8; ++n)
            for (int k = 2; k <= 6; ++k) {
                const SystemParams p{n, k};
                const auto hps = lower_bound_halfplanes(n, k);
                auto pts = all_points(p);
                for (int base = 1; base <= n; ++base)
                    for (int t = 1; t <= base; ++t)
                        pts.push_back(cyclic_transform_point(mds_point({base, k}, t), base, n));
                for (const auto& pt : pts)
                    for (const auto& h : hps)
                        v.require(h.satisfied_by(pt.alpha, pt.beta), pt.label_str() + " violates " + h.provenance);
                for (const auto& c : simulated(p))
                    for (const auto& h : hps)
                        v.require(h.satisfied_by(c.alpha_bar, c.beta_bar), "protocol violates " + h.provenance);
            }
    });

    criterion(12, "2-approximation and large ratio curves", 60, [](Verdict& v) {
        for (int n = 2; n <= 12; ++n)
            for (int k = 1; k <= 12; ++k) v.require(two_approx_check({n, k}).dominated_by_2x, "two_approx");
        for (auto [n, k] : std::vector<std::pair<int, int>>{{20, 8}, {8, 20}, {20, 20}}) {
            const SystemParams p{n, k};
            const auto b = baseline_costs(p);
            const auto upper = lower_hull(all_points(p));
            const auto lower = halfplane_envelope(lower_bound_halfplanes(n, k), b.alpha0, Rational(k), 200);
            const auto r = ratio_curve(upper, lower, 200);
            v.require(r.max_ratio >= Rational(1), "ratio below 1");
            for (const auto& s : r.samples) v.require(s.ratio >= Rational(1), "sample ratio below 1");
            std::printf("     (N,K)=(%d,%d) max ratio %s at alpha %s\n", n, k, r.max_ratio.decimal(6).c_str(),
                        r.argmax_alpha.decimal(6).c_str());
        }
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
