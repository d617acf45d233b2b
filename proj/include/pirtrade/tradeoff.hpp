#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pirtrade/rational.hpp"

namespace pirtrade {

/// (N, K): N servers, K messages.
struct SystemParams {
    int servers = 0;
    int messages = 0;

    /// Throws std::invalid_argument unless servers >= min_servers and
    /// messages >= min_messages.
    void require(int min_servers, int min_messages) const;
};

/// Family name plus an ordered parameter record, e.g. gmds(T1=1,T2=2).
struct PointLabel {
    std::string family;
    std::vector<std::pair<std::string, long>> params;

    std::string str() const;
    friend bool operator==(const PointLabel&, const PointLabel&) = default;
};

/// Normalized (storage, download) pair per server per message symbol.
struct TradeoffPoint {
    Rational alpha;
    Rational beta;
    std::vector<PointLabel> labels;  // several only after tie merging in lower_hull

    TradeoffPoint(Rational a, Rational b, PointLabel label);
    TradeoffPoint(Rational a, Rational b, std::vector<PointLabel> merged);

    std::string label_str() const;
};

struct BaselineCosts {
    Rational alpha0;  // K/N
    Rational beta0;   // sum_{i=1..K} N^-i
};

BaselineCosts baseline_costs(const SystemParams& p);

/// MDS-coded storage, one point per T in [1:N].
std::vector<TradeoffPoint> mds_points(const SystemParams& p);
/// Uncoded storage with replication factor T in [1:N].
std::vector<TradeoffPoint> uncoded_points(const SystemParams& p);
/// Generalized MDS family, one point per 1 <= T1 <= T2 <= N.
std::vector<TradeoffPoint> gmds_points(const SystemParams& p);
/// Cyclically shifted Construction-A point (a) followed by Construction-B
/// points (b), one per divisor T of K with K/T + 1 <= N.
std::vector<TradeoffPoint> prop3_points(const SystemParams& p);

/// Full-replication capacity point (K, beta0) of an (N, K) system.
TradeoffPoint sun_jafar_point(const SystemParams& p);
/// MDS point with parameter T on N servers.
TradeoffPoint mds_point(const SystemParams& p, int t);
TradeoffPoint uncoded_point(const SystemParams& p, int t);
TradeoffPoint gmds_point(const SystemParams& p, int t1, int t2);
/// Construction-A costs on two servers: (K - 1/2, (2^K - 1)/2^K).
TradeoffPoint construction_a_point(int messages);
/// Construction-B costs on N = K/T + 1 servers: (T, (2^T - 1)/2^T).
TradeoffPoint construction_b_point(int messages, int t);

/// Round-robin placement of a base code on base_servers onto target_servers:
/// scales both costs by base_servers/target_servers.
TradeoffPoint cyclic_transform_point(const TradeoffPoint& pt, int base_servers, int target_servers);

struct TwoApproxReport {
    TradeoffPoint point;     // uncoded point at T = 2
    Rational twice_alpha0;
    Rational twice_beta0;
    bool dominated_by_2x;    // alpha == 2*alpha0 and beta < 2*beta0
};

TwoApproxReport two_approx_check(const SystemParams& p);

}  // namespace pirtrade
