#include <doctest.h>

#include "pirtrade/explicit_bounds.hpp"
#include "pirtrade/protocol.hpp"
#include "pirtrade/tradeoff.hpp"

using namespace pirtrade;

namespace {

std::vector<TradeoffPoint> closed_form_points(const SystemParams& p) {
    std::vector<TradeoffPoint> pts;
    for (auto* fam : {&mds_points, &uncoded_points, &gmds_points}) {
        auto v = (*fam)(p);
        pts.insert(pts.end(), v.begin(), v.end());
    }
    auto p3 = prop3_points(p);
    pts.insert(pts.end(), p3.begin(), p3.end());
    pts.push_back(sun_jafar_point(p));
    for (int base = 1; base <= p.servers; ++base) {
        pts.push_back(cyclic_transform_point(sun_jafar_point({base, p.messages}), base, p.servers));
        for (int t = 1; t <= base; ++t)
            pts.push_back(cyclic_transform_point(mds_point({std::max(base, 1), p.messages}, t), base, p.servers));
    }
    return pts;
}

// Measured costs of the simulated protocols that fit (N, K).
std::vector<std::pair<std::string, CostReport>> simulated(const SystemParams& p) {
    std::vector<std::pair<std::string, CostReport>> out;
    if (p.messages <= 6) {
        auto a = build_construction_a(p.messages);
        out.emplace_back(a.name, measure_costs(p.servers == 2 ? a : cyclic_compose(a, p.servers)));
    }
    for (int n = 2; n <= p.servers; ++n)
        if (p.messages % (n - 1) == 0) {
            auto b = build_construction_b(n, p.messages / (n - 1));
            out.emplace_back(b.name, measure_costs(n == p.servers ? b : cyclic_compose(b, p.servers)));
        }
    return out;
}

}  // namespace

TEST_CASE("every halfplane holds at every achievable point") {
    std::size_t checks = 0;
    for (int n = 2; n <= 8; ++n)
        for (int k = 2; k <= 6; ++k) {
            const SystemParams p{n, k};
            const auto hps = lower_bound_halfplanes(n, k);
            for (const auto& pt : closed_form_points(p))
                for (const auto& h : hps) {
                    INFO(n << "," << k << " " << pt.label_str() << " vs " << h.provenance);
                    CHECK(h.satisfied_by(pt.alpha, pt.beta));
                    ++checks;
                }
            for (const auto& [name, c] : simulated(p))
                for (const auto& h : hps) {
                    INFO(n << "," << k << " " << name << " vs " << h.provenance);
                    CHECK(h.satisfied_by(c.alpha_bar, c.beta_bar));
                    ++checks;
                }
        }
    CHECK(checks > 10000);
}
