#include "pirtrade/tradeoff.hpp"

#include <stdexcept>

namespace pirtrade {

namespace {

// (1/N) * sum_{i=0}^{K-1} ratio^i
Rational scaled_geometric(const Rational& ratio, int terms, int servers) {
    Rational sum = 0;
    Rational power = 1;
    for (int i = 0; i < terms; ++i) {
        sum += power;
        power *= ratio;
    }
    return sum / Rational(servers);
}

}  // namespace

void SystemParams::require(int min_servers, int min_messages) const {
    if (servers < min_servers)
        throw std::invalid_argument("N must be at least " + std::to_string(min_servers) +
                                    " (got " + std::to_string(servers) + ")");
    if (messages < min_messages)
        throw std::invalid_argument("K must be at least " + std::to_string(min_messages) +
                                    " (got " + std::to_string(messages) + ")");
}

std::string PointLabel::str() const {
    std::string out = family;
    if (params.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ',';
        out += params[i].first + '=' + std::to_string(params[i].second);
    }
    out += ')';
    return out;
}

TradeoffPoint::TradeoffPoint(Rational a, Rational b, PointLabel label)
    : TradeoffPoint(std::move(a), std::move(b), std::vector<PointLabel>{std::move(label)}) {}

TradeoffPoint::TradeoffPoint(Rational a, Rational b, std::vector<PointLabel> merged)
    : alpha(std::move(a)), beta(std::move(b)), labels(std::move(merged)) {
    if (alpha.sign() <= 0 || beta.sign() <= 0)
        throw std::invalid_argument("TradeoffPoint requires alpha > 0 and beta > 0");
}

std::string TradeoffPoint::label_str() const {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += '|';
        out += labels[i].str();
    }
    return out;
}

BaselineCosts baseline_costs(const SystemParams& p) {
    p.require(1, 1);
    const Rational inv_n(1, p.servers);
    Rational beta0 = 0;
    Rational power = 1;
    for (int i = 1; i <= p.messages; ++i) {
        power *= inv_n;
        beta0 += power;
    }
    return {Rational(p.messages, p.servers), beta0};
}

TradeoffPoint sun_jafar_point(const SystemParams& p) {
    return {Rational(p.messages), baseline_costs(p).beta0,
            PointLabel{"sunjafar", {{"N", p.servers}}}};
}

TradeoffPoint mds_point(const SystemParams& p, int t) {
    if (t < 1 || t > p.servers) throw std::invalid_argument("mds_point: T outside [1:N]");
    return {Rational(p.messages, t), scaled_geometric(Rational(t, p.servers), p.messages, p.servers),
            PointLabel{"mds", {{"T", t}}}};
}

TradeoffPoint uncoded_point(const SystemParams& p, int t) {
    if (t < 1 || t > p.servers) throw std::invalid_argument("uncoded_point: T outside [1:N]");
    return {Rational(static_cast<long>(p.messages) * t, p.servers),
            scaled_geometric(Rational(1, t), p.messages, p.servers),
            PointLabel{"uncoded", {{"T", t}}}};
}

TradeoffPoint gmds_point(const SystemParams& p, int t1, int t2) {
    if (t1 < 1 || t1 > t2 || t2 > p.servers)
        throw std::invalid_argument("gmds_point: need 1 <= T1 <= T2 <= N");
    return {Rational(static_cast<long>(p.messages) * t2, static_cast<long>(p.servers) * t1),
            scaled_geometric(Rational(t1, t2), p.messages, p.servers),
            PointLabel{"gmds", {{"T1", t1}, {"T2", t2}}}};
}

std::vector<TradeoffPoint> mds_points(const SystemParams& p) {
    p.require(2, 1);
    std::vector<TradeoffPoint> out;
    for (int t = 1; t <= p.servers; ++t) out.push_back(mds_point(p, t));
    return out;
}

std::vector<TradeoffPoint> uncoded_points(const SystemParams& p) {
    p.require(2, 1);
    std::vector<TradeoffPoint> out;
    for (int t = 1; t <= p.servers; ++t) out.push_back(uncoded_point(p, t));
    return out;
}

std::vector<TradeoffPoint> gmds_points(const SystemParams& p) {
    p.require(2, 1);
    std::vector<TradeoffPoint> out;
    for (int t1 = 1; t1 <= p.servers; ++t1)
        for (int t2 = t1; t2 <= p.servers; ++t2) out.push_back(gmds_point(p, t1, t2));
    return out;
}

TradeoffPoint construction_a_point(int messages) {
    if (messages < 1) throw std::invalid_argument("construction A needs K >= 1");
    const Rational two_k = Rational::pow(2, messages);
    return {Rational(2L * messages - 1, 2), (two_k - 1) / two_k,
            PointLabel{"constructionA", {{"K", messages}}}};
}

TradeoffPoint construction_b_point(int messages, int t) {
    if (t < 1 || messages % t != 0) throw std::invalid_argument("construction B needs T | K");
    const Rational two_t = Rational::pow(2, t);
    return {Rational(t), (two_t - 1) / two_t,
            PointLabel{"constructionB", {{"K", messages}, {"T", t}}}};
}

std::vector<TradeoffPoint> prop3_points(const SystemParams& p) {
    p.require(2, 2);
    std::vector<TradeoffPoint> out;
    {
        auto pt = cyclic_transform_point(construction_a_point(p.messages), 2, p.servers);
        pt.labels = {PointLabel{"prop3a", {}}};
        out.push_back(std::move(pt));
    }
    for (int t = 1; t <= p.messages; ++t) {
        if (p.messages % t != 0) continue;
        const int base_servers = p.messages / t + 1;
        if (base_servers > p.servers) continue;
        auto pt = cyclic_transform_point(construction_b_point(p.messages, t), base_servers, p.servers);
        pt.labels = {PointLabel{"prop3b", {{"T", t}}}};
        out.push_back(std::move(pt));
    }
    return out;
}

TradeoffPoint cyclic_transform_point(const TradeoffPoint& pt, int base_servers, int target_servers) {
    if (base_servers < 1) throw std::invalid_argument("cyclic transform: base N must be >= 1");
    if (target_servers < base_servers)
        throw std::invalid_argument("cyclic transform: M must be >= base N");
    const Rational scale(base_servers, target_servers);
    std::vector<PointLabel> labels;
    for (const auto& l : pt.labels) {
        PointLabel composed{"cyclic[" + l.str() + "]", {{"N", base_servers}, {"M", target_servers}}};
        labels.push_back(std::move(composed));
    }
    return {pt.alpha * scale, pt.beta * scale, std::move(labels)};
}

TwoApproxReport two_approx_check(const SystemParams& p) {
    p.require(2, 1);
    const auto base = baseline_costs(p);
    auto point = uncoded_point(p, 2);
    const Rational ta = base.alpha0 * 2;
    const Rational tb = base.beta0 * 2;
    const bool ok = point.alpha == ta && point.beta < tb;
    return {std::move(point), ta, tb, ok};
}

}  // namespace pirtrade
