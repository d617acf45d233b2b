#include <doctest.h>

#include <algorithm>

#include "oracle.hpp"
#include "pirtrade/envelope.hpp"
#include "pirtrade/explicit_bounds.hpp"

using namespace pirtrade;

namespace {

TradeoffPoint pt(long a, long b, const char* name = "p") { return {Rational(a), Rational(b), PointLabel{name, {}}}; }

TradeoffPoint pt(Rational a, Rational b, const char* name = "p") { return {a, b, PointLabel{name, {}}}; }

oracle::Q conv(const Rational& r) {
    return oracle::Q(oracle::Z(r.numerator().get_str().c_str())) / oracle::Q(oracle::Z(r.denominator().get_str().c_str()));
}

bool on_or_above(const EnvelopeCurve& c, const TradeoffPoint& p) {
    if (p.alpha < c.alpha_lo()) return false;
    return p.beta >= c.evaluate(p.alpha);
}

}  // namespace

TEST_CASE("lower hull examples") {
    auto single = lower_hull({pt(2, 3)});
    REQUIRE(single.vertices().size() == 1);
    CHECK(single.vertices()[0].alpha == Rational(2));

    auto h = lower_hull({pt(1, 2), pt(2, 1), pt(3, 3)});
    REQUIRE(h.vertices().size() == 2);
    CHECK(h.vertices()[0].alpha == Rational(1));
    CHECK(h.vertices()[1].alpha == Rational(2));

    CHECK_THROWS(lower_hull({}));

    auto merged = lower_hull({pt(1, 1, "a"), pt(1, 1, "b")});
    REQUIRE(merged.vertices().size() == 1);
    CHECK(merged.vertices()[0].label == "a|b");
}

TEST_CASE("lower hull property: convex, domination-free, inputs above") {
    auto gen = oracle::rng(42);
    std::uniform_int_distribution<long> coord(1, 60), den(1, 7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<TradeoffPoint> pts;
        const int count = 1 + static_cast<int>(gen() % 25);
        for (int i = 0; i < count; ++i)
            pts.push_back(pt(Rational(coord(gen), den(gen)), Rational(coord(gen), den(gen))));
        const auto hull = lower_hull(pts);  // constructor validates monotone + convex
        const auto& v = hull.vertices();
        for (const auto& p : pts) CHECK(on_or_above(hull, p));
        // Every vertex is an input and no input strictly dominates a vertex.
        for (const auto& x : v) {
            CHECK(std::any_of(pts.begin(), pts.end(),
                              [&](const TradeoffPoint& p) { return p.alpha == x.alpha && p.beta == x.beta; }));
            for (const auto& p : pts)
                CHECK_FALSE((p.alpha <= x.alpha && p.beta <= x.beta && (p.alpha < x.alpha || p.beta < x.beta)));
        }
        // Strict convexity at interior vertices.
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            const Rational s1 = (v[i].beta - v[i - 1].beta) / (v[i].alpha - v[i - 1].alpha);
            const Rational s2 = (v[i + 1].beta - v[i].beta) / (v[i + 1].alpha - v[i].alpha);
            CHECK(s1 < s2);
        }
    }
}

TEST_CASE("envelope curve rejects bad vertex lists") {
    CHECK_THROWS(EnvelopeCurve(std::vector<CurveVertex>{}));
    CHECK_THROWS(EnvelopeCurve({{Rational(1), Rational(1), {}}, {Rational(1), Rational(0), {}}}));
    CHECK_THROWS(EnvelopeCurve({{Rational(1), Rational(1), {}}, {Rational(2), Rational(2), {}}}));
    // concave
    CHECK_THROWS(EnvelopeCurve(
        {{Rational(0), Rational(4), {}}, {Rational(1), Rational(3), {}}, {Rational(2), Rational(0), {}}}));
    EnvelopeCurve c({{Rational(0), Rational(4), {}}, {Rational(2), Rational(0), {}}});
    CHECK(c.evaluate(Rational(1)) == Rational(2));
    CHECK(c.evaluate(Rational(5)) == Rational(0));
    CHECK_THROWS_AS(c.evaluate(Rational(-1)), std::out_of_range);
}

TEST_CASE("halfplane envelope examples") {
    const Rational b0(31, 125);
    auto flat = halfplane_envelope({HalfPlane(Rational(0), Rational(5), b0 * 5)}, Rational(3, 5), Rational(3), 5);
    for (const auto& v : flat.vertices()) CHECK(v.beta == b0);

    // 4a + b >= 3 meets b >= 31/125 at a = (3 - 31/125)/4 = 86/125.
    auto knee = halfplane_envelope({HalfPlane(Rational(4), Rational(1), Rational(3)), HalfPlane(Rational(0), Rational(5), b0 * 5)},
                                   Rational(3, 5), Rational(3), 3);
    bool has_knee = false;
    for (const auto& v : knee.vertices())
        if (v.alpha == Rational(86, 125)) has_knee = v.beta == b0;
    CHECK(has_knee);
    CHECK(knee.evaluate(Rational(3, 5)) == Rational(3) - Rational(12, 5));

    CHECK_THROWS(halfplane_envelope({}, Rational(0), Rational(1), 2));
    CHECK_THROWS(HalfPlane(Rational(-1), Rational(1), Rational(0)));
    CHECK_THROWS(HalfPlane(Rational(0), Rational(0), Rational(0)));

    // alpha-cut clamps the domain
    auto cut = halfplane_envelope({HalfPlane(Rational(1), Rational(0), Rational(1)), HalfPlane(Rational(0), Rational(1), Rational(1))},
                                  Rational(0), Rational(2), 3);
    CHECK(cut.alpha_lo() == Rational(1));
}

TEST_CASE("halfplane envelope equals pointwise maximum for the (5,3) bound set") {
    const auto hps = lower_bound_halfplanes(5, 3);
    const auto curve = halfplane_envelope(hps, Rational(3, 5), Rational(3), 40);
    // Independent oracle: maximize over halfplanes at many rational alphas,
    // including off-grid ones; interpolation must be exact.
    for (int i = 0; i <= 300; ++i) {
        const Rational a = Rational(3, 5) + Rational(12, 5) * Rational(i, 300);
        oracle::Q best = -1000000;
        const oracle::Q qa = conv(a);
        for (const auto& h : hps) {
            if (h.is_alpha_cut()) continue;
            const oracle::Q v = (conv(h.rhs) - conv(h.ca) * qa) / conv(h.cb);
            if (v > best) best = v;
        }
        CHECK(oracle::same(curve.evaluate(a), best));
    }
}

TEST_CASE("ratio curve") {
    EnvelopeCurve up({{Rational(1), Rational(4), {}}, {Rational(3), Rational(2), {}}});
    EnvelopeCurve lo({{Rational(0), Rational(2), {}}, {Rational(2), Rational(1), {}}});
    const auto r = ratio_curve(up, lo, 3);
    REQUIRE(r.samples.size() == 3);
    CHECK(r.samples[0].alpha == Rational(1));
    CHECK(r.samples[2].alpha == Rational(2));
    CHECK(r.samples[0].ratio == Rational(4) / Rational(3, 2));
    CHECK(r.max_ratio == Rational(3));
    CHECK(r.argmax_alpha == Rational(2));

    EnvelopeCurve far({{Rational(10), Rational(1), {}}, {Rational(11), Rational(1), {}}});
    CHECK_THROWS(ratio_curve(far, lo, 3));
    EnvelopeCurve zero({{Rational(0), Rational(0), {}}, {Rational(5), Rational(0), {}}});
    CHECK_THROWS(ratio_curve(up, zero, 3));
}
