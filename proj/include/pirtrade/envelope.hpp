#pragma once

#include <string>
#include <vector>

#include "pirtrade/rational.hpp"
#include "pirtrade/tradeoff.hpp"

namespace pirtrade {

/// ca*alpha + cb*beta >= rhs with ca, cb >= 0, not both zero. cb == 0 is an
/// alpha-cut.
struct HalfPlane {
    Rational ca;
    Rational cb;
    Rational rhs;
    std::string provenance;

    HalfPlane(Rational ca_, Rational cb_, Rational rhs_, std::string provenance_ = {});

    bool is_alpha_cut() const { return cb.is_zero(); }
    bool satisfied_by(const Rational& alpha, const Rational& beta) const {
        return ca * alpha + cb * beta >= rhs;
    }
};

struct CurveVertex {
    Rational alpha;
    Rational beta;
    std::string label;
};

/// Piecewise-linear curve through its vertices: alpha strictly increasing,
/// beta non-increasing, slopes non-decreasing. Flat to the right of the last
/// vertex; undefined left of the first.
class EnvelopeCurve {
public:
    EnvelopeCurve() = default;
    explicit EnvelopeCurve(std::vector<CurveVertex> vertices);

    const std::vector<CurveVertex>& vertices() const { return vertices_; }
    const Rational& alpha_lo() const { return vertices_.front().alpha; }
    const Rational& alpha_hi() const { return vertices_.back().alpha; }

    Rational evaluate(const Rational& alpha) const;
    /// Scales every beta by `factor` (> 0).
    EnvelopeCurve scaled(const Rational& factor) const;

private:
    std::vector<CurveVertex> vertices_;
};

/// Exact rational grid lo + i*(hi-lo)/(count-1), i in [0, count).
std::vector<Rational> alpha_grid(const Rational& lo, const Rational& hi, int count);

/// Lower-left convex envelope of achievable points. Dominated points drop
/// out; coincident points merge their labels.
EnvelopeCurve lower_hull(const std::vector<TradeoffPoint>& points);

/// max over halfplanes with cb > 0 of (rhs - ca*alpha)/cb.
Rational halfplane_value(const std::vector<HalfPlane>& hps, const Rational& alpha);

/// Lower-bound curve from halfplanes: the grid on [alpha_lo, alpha_hi]
/// (clipped by alpha-cuts) plus every knee inside the domain, so linear
/// interpolation between vertices is exact.
EnvelopeCurve halfplane_envelope(const std::vector<HalfPlane>& hps, const Rational& alpha_lo,
                                 const Rational& alpha_hi, int grid);

struct RatioSample {
    Rational alpha;
    Rational beta_upper;
    Rational beta_lower;
    Rational ratio;
};

struct RatioCurve {
    std::vector<RatioSample> samples;
    Rational max_ratio;
    Rational argmax_alpha;
};

RatioCurve ratio_curve(const EnvelopeCurve& upper, const EnvelopeCurve& lower, int grid);

}  // namespace pirtrade
