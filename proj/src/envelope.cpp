#include "pirtrade/envelope.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace pirtrade {

namespace {

// (a - o) x (b - o) in the (alpha, beta) plane.
Rational cross(const CurveVertex& o, const CurveVertex& a, const CurveVertex& b) {
    return (a.alpha - o.alpha) * (b.beta - o.beta) - (a.beta - o.beta) * (b.alpha - o.alpha);
}

}  // namespace

HalfPlane::HalfPlane(Rational ca_, Rational cb_, Rational rhs_, std::string provenance_)
    : ca(std::move(ca_)), cb(std::move(cb_)), rhs(std::move(rhs_)), provenance(std::move(provenance_)) {
    if (ca.sign() < 0 || cb.sign() < 0) throw std::invalid_argument("HalfPlane: negative weight");
    if (ca.is_zero() && cb.is_zero()) throw std::invalid_argument("HalfPlane: both weights zero");
}

EnvelopeCurve::EnvelopeCurve(std::vector<CurveVertex> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("EnvelopeCurve: no vertices");
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        if (!(vertices_[i - 1].alpha < vertices_[i].alpha))
            throw std::invalid_argument("EnvelopeCurve: alpha not strictly increasing");
        if (vertices_[i].beta > vertices_[i - 1].beta)
            throw std::invalid_argument("EnvelopeCurve: beta increasing");
        if (i >= 2 && cross(vertices_[i - 2], vertices_[i - 1], vertices_[i]).sign() < 0)
            throw std::invalid_argument("EnvelopeCurve: not convex");
    }
}

Rational EnvelopeCurve::evaluate(const Rational& alpha) const {
    if (alpha < alpha_lo()) throw std::out_of_range("EnvelopeCurve: alpha below domain");
    if (alpha >= alpha_hi()) return vertices_.back().beta;
    const auto it = std::upper_bound(vertices_.begin(), vertices_.end(), alpha,
                                     [](const Rational& a, const CurveVertex& v) { return a < v.alpha; });
    const CurveVertex& right = *it;
    const CurveVertex& left = *(it - 1);
    const Rational t = (alpha - left.alpha) / (right.alpha - left.alpha);
    return left.beta + t * (right.beta - left.beta);
}

EnvelopeCurve EnvelopeCurve::scaled(const Rational& factor) const {
    if (factor.sign() <= 0) throw std::invalid_argument("EnvelopeCurve::scaled: factor must be > 0");
    auto copy = vertices_;
    for (auto& v : copy) v.beta *= factor;
    return EnvelopeCurve(std::move(copy));
}

std::vector<Rational> alpha_grid(const Rational& lo, const Rational& hi, int count) {
    if (count < 2) throw std::invalid_argument("grid must have at least 2 points");
    if (hi < lo) throw std::invalid_argument("grid: empty alpha range");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(count));
    const Rational step = (hi - lo) / Rational(count - 1);
    for (int i = 0; i < count; ++i) out.push_back(lo + step * Rational(i));
    return out;
}

EnvelopeCurve lower_hull(const std::vector<TradeoffPoint>& points) {
    if (points.empty()) throw std::invalid_argument("lower_hull: empty point set");

    std::vector<const TradeoffPoint*> order;
    for (const auto& p : points) order.push_back(&p);
    std::stable_sort(order.begin(), order.end(), [](const TradeoffPoint* a, const TradeoffPoint* b) {
        if (a->alpha != b->alpha) return a->alpha < b->alpha;
        return a->beta < b->beta;
    });

    // Merge coincident points, then drop everything weakly dominated by an
    // earlier survivor (sorted by alpha, so earlier means alpha' <= alpha).
    std::vector<CurveVertex> frontier;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const TradeoffPoint& p = *order[i];
        if (!frontier.empty() && frontier.back().alpha == p.alpha && frontier.back().beta == p.beta) {
            frontier.back().label += '|' + p.label_str();
            continue;
        }
        if (!frontier.empty() && frontier.back().beta <= p.beta) continue;
        frontier.push_back({p.alpha, p.beta, p.label_str()});
    }

    std::vector<CurveVertex> hull;
    for (auto& v : frontier) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), v).sign() <= 0) hull.pop_back();
        hull.push_back(std::move(v));
    }
    return EnvelopeCurve(std::move(hull));
}

Rational halfplane_value(const std::vector<HalfPlane>& hps, const Rational& alpha) {
    std::optional<Rational> best;
    for (const auto& h : hps) {
        if (h.is_alpha_cut()) continue;
        Rational v = (h.rhs - h.ca * alpha) / h.cb;
        if (!best || v > *best) best = std::move(v);
    }
    if (!best) throw std::invalid_argument("halfplane set has no beta-bounding halfplane");
    return *best;
}

EnvelopeCurve halfplane_envelope(const std::vector<HalfPlane>& hps, const Rational& alpha_lo,
                                 const Rational& alpha_hi, int grid) {
    if (hps.empty()) throw std::invalid_argument("halfplane_envelope: empty halfplane list");
    const auto raw_grid = alpha_grid(alpha_lo, alpha_hi, grid);

    Rational lo = alpha_lo;
    for (const auto& h : hps)
        if (h.is_alpha_cut()) lo = max(lo, h.rhs / h.ca);
    if (lo > alpha_hi) throw std::invalid_argument("halfplane_envelope: alpha-cuts empty the domain");

    std::vector<Rational> alphas{lo};
    for (const auto& a : raw_grid)
        if (a > lo) alphas.push_back(a);

    // Breakpoints of the max of lines: pairwise crossings where both are active.
    std::vector<const HalfPlane*> lines;
    for (const auto& h : hps)
        if (!h.is_alpha_cut()) lines.push_back(&h);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const HalfPlane& p = *lines[i];
            const HalfPlane& q = *lines[j];
            // (rp - cap a)/cbp == (rq - caq a)/cbq
            const Rational denom = p.ca * q.cb - q.ca * p.cb;
            if (denom.is_zero()) continue;
            const Rational a = (p.rhs * q.cb - q.rhs * p.cb) / denom;
            if (a <= lo || a >= alpha_hi) continue;
            if ((p.rhs - p.ca * a) / p.cb == halfplane_value(hps, a)) alphas.push_back(a);
        }
    }
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

    std::vector<CurveVertex> vertices;
    vertices.reserve(alphas.size());
    for (auto& a : alphas) {
        Rational b = halfplane_value(hps, a);
        vertices.push_back({std::move(a), std::move(b), {}});
    }
    return EnvelopeCurve(std::move(vertices));
}

RatioCurve ratio_curve(const EnvelopeCurve& upper, const EnvelopeCurve& lower, int grid) {
    const Rational lo = max(upper.alpha_lo(), lower.alpha_lo());
    const Rational hi = min(upper.alpha_hi(), lower.alpha_hi());
    if (lo > hi) throw std::invalid_argument("ratio_curve: curves have no overlapping alpha domain");

    std::vector<Rational> alphas = lo == hi ? std::vector<Rational>{lo} : alpha_grid(lo, hi, grid);
    RatioCurve out;
    for (auto& a : alphas) {
        Rational ub = upper.evaluate(a);
        Rational lb = lower.evaluate(a);
        if (lb.sign() <= 0) throw std::invalid_argument("ratio_curve: lower curve not positive at alpha=" + a.str());
        Rational r = ub / lb;
        if (out.samples.empty() || r > out.max_ratio) {
            out.max_ratio = r;
            out.argmax_alpha = a;
        }
        out.samples.push_back({std::move(a), std::move(ub), std::move(lb), std::move(r)});
    }
    return out;
}

}  // namespace pirtrade
