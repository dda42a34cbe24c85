#pragma once

// Concrete set classes with generalized signed-distance functions rho_A,
// sublevel offsets A^{t|rho}, the C^1 smoothing profiles f_A^{+-eps}, and
// randomized audits of the structural assumptions the main bounds rest on.
//
// Three variants ship:
//   HalfSpace     {x : <n,x> <= offset}, rho = <n,x> - offset, kappa = 1
//   Ball          {x : |x-c| <= r},      rho = |x-c| - r,      kappa = 1
//   IntervalUnion d = 1 unions of disjoint closed intervals whose pairwise
//                 midpoint distances stay >= delta; rho is linear outside the
//                 hull, a concave parabolic bridge across gaps, and half the
//                 signed Euclidean depth inside intervals (the halved tent is
//                 what makes A^{-eps|rho} = A^{-2eps} and the erosion-dilation
//                 containment work), kappa = 1/2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

namespace clbound {

enum class SetKind { HalfSpace, Ball, IntervalUnion };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

class TestSet {
public:
    static TestSet half_space(std::vector<double> normal, double offset) {
        if (normal.empty()) throw std::invalid_argument("half_space: empty normal");
        double n2 = 0.0;
        for (double c : normal) n2 += c * c;
        const double nrm = std::sqrt(n2);
        if (std::abs(nrm - 1.0) > 1e-12) {
            if (nrm < 1e-14) throw std::invalid_argument("half_space: zero normal");
            for (double& c : normal) c /= nrm;
        }
        TestSet s;
        s.kind_ = SetKind::HalfSpace;
        s.dim_ = static_cast<int>(normal.size());
        s.vec_ = std::move(normal);
        s.scalar_ = offset;
        return s;
    }

    static TestSet ball(std::vector<double> center, double radius) {
        if (center.empty()) throw std::invalid_argument("ball: empty center");
        if (!(radius > 0.0)) throw std::invalid_argument("ball: radius > 0 required");
        TestSet s;
        s.kind_ = SetKind::Ball;
        s.dim_ = static_cast<int>(center.size());
        s.vec_ = std::move(center);
        s.scalar_ = radius;
        return s;
    }

    static TestSet interval_union(std::vector<Interval> intervals, double delta) {
        if (intervals.empty()) throw std::invalid_argument("interval_union: at least one interval");
        if (!(delta > 0.0)) throw std::invalid_argument("interval_union: delta > 0 required");
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (std::size_t j = 0; j < intervals.size(); ++j) {
            if (!(intervals[j].hi > intervals[j].lo))
                throw std::invalid_argument("interval_union: intervals must have positive length");
            if (j + 1 < intervals.size() && !(intervals[j + 1].lo > intervals[j].hi))
                throw std::invalid_argument("interval_union: intervals must be disjoint");
        }
        for (std::size_t j = 0; j + 1 < intervals.size(); ++j) {
            const double m0 = 0.5 * (intervals[j].lo + intervals[j].hi);
            const double m1 = 0.5 * (intervals[j + 1].lo + intervals[j + 1].hi);
            if (m1 - m0 < delta - 1e-12)
                throw std::invalid_argument("interval_union: adjacent midpoints closer than delta");
        }
        TestSet s;
        s.kind_ = SetKind::IntervalUnion;
        s.dim_ = 1;
        s.intervals_ = std::move(intervals);
        s.scalar_ = delta;
        return s;
    }

    SetKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double kappa() const { return kind_ == SetKind::IntervalUnion ? 0.5 : 1.0; }

    const std::vector<double>& normal() const { require(SetKind::HalfSpace); return vec_; }
    double offset() const { require(SetKind::HalfSpace); return scalar_; }
    const std::vector<double>& center() const { require(SetKind::Ball); return vec_; }
    double radius() const { require(SetKind::Ball); return scalar_; }
    const std::vector<Interval>& intervals() const { require(SetKind::IntervalUnion); return intervals_; }
    double delta() const { require(SetKind::IntervalUnion); return scalar_; }

    double rho(const std::vector<double>& x) const {
        check_dim(x);
        switch (kind_) {
            case SetKind::HalfSpace: {
                double dot = 0.0;
                for (int i = 0; i < dim_; ++i) dot += vec_[i] * x[i];
                return dot - scalar_;
            }
            case SetKind::Ball:
                return dist_to_center(x) - scalar_;
            case SetKind::IntervalUnion:
                return rho1(x[0]);
        }
        return 0.0;
    }

    // Scalar fast path (IntervalUnion, or any variant at d = 1).
    double rho1(double x) const {
        if (kind_ == SetKind::HalfSpace) return vec_[0] * x - scalar_;
        if (kind_ == SetKind::Ball) return std::abs(x - vec_[0]) - scalar_;
        const auto& iv = intervals_;
        if (x <= iv.front().lo) return iv.front().lo - x;
        if (x >= iv.back().hi) return x - iv.back().hi;
        for (std::size_t j = 0; j < iv.size(); ++j) {
            if (x >= iv[j].lo && x <= iv[j].hi) {
                const double half = 0.5 * (iv[j].hi - iv[j].lo);
                const double mid = 0.5 * (iv[j].lo + iv[j].hi);
                return -0.5 * (half - std::abs(x - mid));
            }
            if (j + 1 < iv.size() && x > iv[j].hi && x < iv[j + 1].lo) {
                const double h = 0.5 * (iv[j + 1].lo - iv[j].hi);
                const double g = 0.5 * (iv[j + 1].lo + iv[j].hi);
                return (h * h - (x - g) * (x - g)) / (2.0 * h);
            }
        }
        throw std::logic_error("rho1: interval scan fell through");
    }

    bool contains(const std::vector<double>& x) const {
        check_dim(x);
        switch (kind_) {
            case SetKind::HalfSpace: {
                double dot = 0.0;
                for (int i = 0; i < dim_; ++i) dot += vec_[i] * x[i];
                return dot <= scalar_;
            }
            case SetKind::Ball:
                return dist_to_center(x) <= scalar_;
            case SetKind::IntervalUnion:
                for (const auto& I : intervals_)
                    if (x[0] >= I.lo && x[0] <= I.hi) return true;
                return false;
        }
        return false;
    }

    // Distance from x to the nearest kink of rho; finite-difference stencils
    // must not straddle these. HalfSpace rho is globally smooth; Ball has a
    // single kink at the center; IntervalUnion kinks at interval endpoints
    // and tent bottoms.
    double seam_distance(const std::vector<double>& x) const {
        check_dim(x);
        switch (kind_) {
            case SetKind::HalfSpace:
                return std::numeric_limits<double>::infinity();
            case SetKind::Ball:
                return dist_to_center(x);
            case SetKind::IntervalUnion: {
                double d = std::numeric_limits<double>::infinity();
                for (const auto& I : intervals_) {
                    d = std::min(d, std::abs(x[0] - I.lo));
                    d = std::min(d, std::abs(x[0] - I.hi));
                    d = std::min(d, std::abs(x[0] - 0.5 * (I.lo + I.hi)));
                }
                return d;
            }
        }
        return 0.0;
    }

    TestSet translated(const std::vector<double>& y) const {
        check_dim(y);
        switch (kind_) {
            case SetKind::HalfSpace: {
                double dot = 0.0;
                for (int i = 0; i < dim_; ++i) dot += vec_[i] * y[i];
                return half_space(vec_, scalar_ + dot);
            }
            case SetKind::Ball: {
                std::vector<double> c = vec_;
                for (int i = 0; i < dim_; ++i) c[i] += y[i];
                return ball(std::move(c), scalar_);
            }
            case SetKind::IntervalUnion: {
                std::vector<Interval> iv = intervals_;
                for (auto& I : iv) {
                    I.lo += y[0];
                    I.hi += y[0];
                }
                return interval_union(std::move(iv), scalar_);
            }
        }
        throw std::logic_error("translated: unknown kind");
    }

    // Uniform scaling qA for q >= 1; stays in class (delta scales up).
    TestSet scaled(double q) const {
        if (!(q >= 1.0)) throw std::invalid_argument("scaled: q >= 1 required");
        switch (kind_) {
            case SetKind::HalfSpace:
                return half_space(vec_, scalar_ * q);
            case SetKind::Ball: {
                std::vector<double> c = vec_;
                for (double& v : c) v *= q;
                return ball(std::move(c), scalar_ * q);
            }
            case SetKind::IntervalUnion: {
                std::vector<Interval> iv = intervals_;
                for (auto& I : iv) {
                    I.lo *= q;
                    I.hi *= q;
                }
                return interval_union(std::move(iv), scalar_ * q);
            }
        }
        throw std::logic_error("scaled: unknown kind");
    }

    // Axis-aligned sampling box that comfortably covers the boundary region.
    void sampling_box(double margin, std::vector<double>& lo, std::vector<double>& hi) const {
        lo.assign(dim_, 0.0);
        hi.assign(dim_, 0.0);
        switch (kind_) {
            case SetKind::HalfSpace:
                for (int i = 0; i < dim_; ++i) {
                    lo[i] = -std::abs(scalar_) - margin;
                    hi[i] = std::abs(scalar_) + margin;
                }
                break;
            case SetKind::Ball:
                for (int i = 0; i < dim_; ++i) {
                    lo[i] = vec_[i] - scalar_ - margin;
                    hi[i] = vec_[i] + scalar_ + margin;
                }
                break;
            case SetKind::IntervalUnion:
                lo[0] = intervals_.front().lo - margin;
                hi[0] = intervals_.back().hi + margin;
                break;
        }
    }

private:
    void require(SetKind k) const {
        if (kind_ != k) throw std::logic_error("TestSet: accessor for wrong variant");
    }
    void check_dim(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("TestSet: dimension mismatch");
    }
    double dist_to_center(const std::vector<double>& x) const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double d = x[i] - vec_[i];
            s += d * d;
        }
        return std::sqrt(s);
    }

    SetKind kind_ = SetKind::Ball;
    int dim_ = 1;
    std::vector<double> vec_;
    std::vector<Interval> intervals_;
    double scalar_ = 1.0;  // offset | radius | delta
};

// ---------------------------------------------------------------------------
// Offsets A^{t|rho}
// ---------------------------------------------------------------------------

struct OffsetResult {
    enum class Kind { Set, Empty, Full };
    Kind kind = Kind::Empty;
    std::optional<TestSet> set;

    static OffsetResult empty() { return {Kind::Empty, std::nullopt}; }
    static OffsetResult full() { return {Kind::Full, std::nullopt}; }
    static OffsetResult of(TestSet s) { return {Kind::Set, std::move(s)}; }

    bool is_set() const { return kind == Kind::Set; }
    bool contains(const std::vector<double>& x) const {
        if (kind == Kind::Empty) return false;
        if (kind == Kind::Full) return true;
        return set->contains(x);
    }
};

inline OffsetResult offset_set(const TestSet& A, double t) {
    switch (A.kind()) {
        case SetKind::HalfSpace:
            return OffsetResult::of(TestSet::half_space(A.normal(), A.offset() + t));
        case SetKind::Ball: {
            const double r = A.radius() + t;
            // Radius-0 erosion maps to Empty by convention.
            if (r <= 0.0) return OffsetResult::empty();
            return OffsetResult::of(TestSet::ball(A.center(), r));
        }
        case SetKind::IntervalUnion:
            break;
    }
    const auto& iv = A.intervals();
    std::vector<Interval> out;
    if (t < 0.0) {
        // {rho <= t}: the halved tent erodes every interval by 2|t| per side.
        const double shrink = -2.0 * t;
        for (const auto& I : iv)
            if (I.hi - I.lo > 2.0 * shrink) out.push_back({I.lo + shrink, I.hi - shrink});
        if (out.empty()) return OffsetResult::empty();
    } else {
        // Dilation: the hull grows by t on each side; a gap with half-width H
        // keeps only |x - g| >= sqrt(H(H - 2t)) and is absorbed once t >= H/2.
        double lo = iv.front().lo - t;
        for (std::size_t j = 0; j + 1 < iv.size(); ++j) {
            const double H = 0.5 * (iv[j + 1].lo - iv[j].hi);
            const double g = 0.5 * (iv[j + 1].lo + iv[j].hi);
            if (t >= 0.5 * H) continue;  // merge across this gap
            const double h = std::sqrt(H * (H - 2.0 * t));
            out.push_back({lo, g - h});
            lo = g + h;
        }
        out.push_back({lo, iv.back().hi + t});
    }
    // Honest per-set certificate: the recomputed minimum adjacent midpoint
    // gap. Erosions preserve midpoints so this never shrinks there; bridge
    // dilations can reduce it (by at most half), so the stored delta must
    // reflect the result, not the input.
    double delta = A.delta();
    if (out.size() >= 2) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j + 1 < out.size(); ++j) {
            const double m0 = 0.5 * (out[j].lo + out[j].hi);
            const double m1 = 0.5 * (out[j + 1].lo + out[j + 1].hi);
            dmin = std::min(dmin, m1 - m0);
        }
        delta = std::min(delta, dmin);
    }
    return OffsetResult::of(TestSet::interval_union(std::move(out), delta));
}

// ---------------------------------------------------------------------------
// Smoothing
// ---------------------------------------------------------------------------

// g: 1 on (-inf,0], 1-2u^2 on [0,1/2], 2(1-u)^2 on [1/2,1], 0 on [1,inf).
// C^1 with M1(g) = 2, M2(g) = 4.
inline double smoothing_g(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    if (u <= 0.5) return 1.0 - 2.0 * u * u;
    const double v = 1.0 - u;
    return 2.0 * v * v;
}

inline double smoothing_g_prime(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    if (u <= 0.5) return -4.0 * u;
    return -4.0 * (1.0 - u);
}

// Inverse of g on (0,1), two branches around g(1/2) = 1/2.
inline double smoothing_g_inv(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("smoothing_g_inv: u in (0,1) required");
    if (u >= 0.5) return std::sqrt(0.5 * (1.0 - u));
    return 1.0 - std::sqrt(0.5 * u);
}

struct SmoothingProfile {
    TestSet set;
    double epsilon = 0.0;
    bool outer = true;  // outer: f_A^{+eps}; inner: f_A^{-eps} = f_{A^{-eps|rho}}^{+eps}

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("SmoothingProfile: epsilon > 0 required");
    }
};

// Evaluator with the inner erosion precomputed.
class SmoothIndicator {
public:
    explicit SmoothIndicator(SmoothingProfile p) : profile_(std::move(p)) {
        profile_.validate();
        if (!profile_.outer) {
            OffsetResult eroded = offset_set(profile_.set, -profile_.epsilon);
            if (eroded.is_set())
                base_ = std::move(*eroded.set);
            else
                vanished_ = true;
        } else {
            base_ = profile_.set;
        }
    }

    double operator()(const std::vector<double>& x) const {
        if (vanished_) return 0.0;
        return smoothing_g(base_->rho(x) / profile_.epsilon);
    }

    bool vanished() const { return vanished_; }
    const TestSet& base_set() const { return *base_; }
    const SmoothingProfile& profile() const { return profile_; }

private:
    SmoothingProfile profile_;
    std::optional<TestSet> base_;
    bool vanished_ = false;
};

inline double smooth_indicator(const SmoothingProfile& profile, const std::vector<double>& x) {
    return SmoothIndicator(profile)(x);
}

// ---------------------------------------------------------------------------
// Lipschitz probes
// ---------------------------------------------------------------------------

struct LipschitzEstimate {
    double m1_hat = 0.0;
    double m2_hat = 0.0;
    long pairs = 0;
};

namespace detail {

inline std::vector<double> fd_gradient(const SmoothIndicator& f, std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double up = f(x);
        x[i] = xi - h;
        const double dn = f(x);
        x[i] = xi;
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

// The stencil around x must stay clear of the seams of g (rho/eps crossing
// 0, 1/2 or 1) and of the kinks of rho itself.
inline bool stencil_clear(const SmoothIndicator& f, const std::vector<double>& x, double h) {
    const TestSet& A = f.base_set();
    const double eps = f.profile().epsilon;
    if (A.seam_distance(x) < 8.0 * h) return false;
    const double u = A.rho(x) / eps;
    const double safety = 8.0 * h / eps + 1e-8;
    for (double seam : {0.0, 0.5, 1.0})
        if (std::abs(u - seam) < safety) return false;
    return true;
}

}  // namespace detail

// Sampled estimates of M1(f) and M2(f) for a smoothing profile. Points are
// drawn in a band around the boundary; gradient pairs rejected near branch
// seams so the central differences see a single smooth piece.
inline LipschitzEstimate lipschitz_probe(const SmoothingProfile& profile, int samples,
                                         std::uint64_t seed) {
    profile.validate();
    if (samples < 1000) throw std::invalid_argument("lipschitz_probe: samples >= 1000 required");
    SmoothIndicator f(profile);
    LipschitzEstimate est;
    if (f.vanished()) return est;

    const TestSet& A = f.base_set();
    const double eps = profile.epsilon;
    const int d = A.dim();
    const double h = 1e-6 * eps;

    std::vector<double> lo, hi;
    A.sampling_box(2.0 * eps + 1.0, lo, hi);
    Rng rng(seed, 0x4c495053ULL);

    auto sample_band = [&](std::vector<double>& x) {
        for (int tries = 0; tries < 400; ++tries) {
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
            if (std::abs(A.rho(x)) <= 1.6 * eps) return true;
        }
        return false;
    };

    std::vector<double> x(d), y(d);
    for (int s = 0; s < samples; ++s) {
        if (!sample_band(x)) continue;
        // Step partner: random direction, length spread across the band scale.
        const double step = eps * std::exp(rng.uniform(std::log(1e-3), std::log(0.5)));
        std::vector<double> dir = rng.sphere(d);
        double dist2 = 0.0;
        for (int i = 0; i < d; ++i) {
            y[i] = x[i] + step * dir[i];
            const double di = y[i] - x[i];
            dist2 += di * di;
        }
        const double dist = std::sqrt(dist2);
        if (dist < 1e-12) continue;

        const double fx = f(x), fy = f(y);
        est.m1_hat = std::max(est.m1_hat, std::abs(fx - fy) / dist);

        if (!detail::stencil_clear(f, x, h) || !detail::stencil_clear(f, y, h)) continue;
        const std::vector<double> gx = detail::fd_gradient(f, x, h);
        const std::vector<double> gy = detail::fd_gradient(f, y, h);
        double gd2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double gi = gx[i] - gy[i];
            gd2 += gi * gi;
        }
        est.m2_hat = std::max(est.m2_hat, std::sqrt(gd2) / dist);
        ++est.pairs;
    }
    return est;
}

// ---------------------------------------------------------------------------
// Assumption audit
// ---------------------------------------------------------------------------

struct AuditOptions {
    // Claimed kappa = kappa_factor * variant kappa. 1.0 audits the honest
    // constant; 0.5 is the deliberate corruption used as a negative control.
    double kappa_factor = 1.0;
    double tol = 1e-7;
    double fd_depth_min = 0.05;  // minimum rho for gradient-modulus pairs
};

struct AuditViolation {
    std::string assumption;
    int set_index = -1;
    std::string detail;
};

struct AuditReport {
    long trials = 0;
    long checks = 0;
    std::vector<AuditViolation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string point_str(const std::vector<double>& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(x[i]);
    }
    return s + ")";
}

// For IntervalUnion, (A8) pairs must sit in one connected component of
// {rho > 0}: the gradient modulus with kappa = 1/2 is a local property there
// (cross-component pairs would need kappa = 1).
inline bool same_positive_component(const TestSet& A, double x, double y) {
    const double a = std::min(x, y), b = std::max(x, y);
    for (const auto& I : A.intervals())
        if (I.lo <= b && I.hi >= a) return false;
    return true;
}

inline double norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline std::vector<double> rho_gradient_fd(const TestSet& A, std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double up = A.rho(x);
        x[i] = xi - h;
        const double dn = A.rho(x);
        x[i] = xi;
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

}  // namespace detail

inline AuditReport assumption_audit(const std::vector<TestSet>& family, int trials,
                                    std::uint64_t seed, const AuditOptions& opts = {}) {
    if (trials < 1000) throw std::invalid_argument("assumption_audit: trials >= 1000 required");
    AuditReport report;
    auto flag = [&](const char* a, int idx, std::string detail) {
        report.violations.push_back({a, idx, std::move(detail)});
    };

    for (std::size_t si = 0; si < family.size(); ++si) {
        const TestSet& A = family[si];
        const int d = A.dim();
        const int idx = static_cast<int>(si);
        Rng rng(seed, 0xA0D17ULL + si);
        std::vector<double> lo, hi;
        A.sampling_box(4.0, lo, hi);
        auto draw = [&](std::vector<double>& x) {
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
        };
        std::vector<double> x(d), y(d), z(d);

        for (int t = 0; t < trials; ++t) {
            ++report.trials;

            // (A4) sign convention.
            draw(x);
            const double rx = A.rho(x);
            ++report.checks;
            if (A.contains(x) ? rx > opts.tol : rx < -opts.tol)
                flag("A4", idx, "sign mismatch at " + detail::point_str(x) + " rho=" + std::to_string(rx));

            // (A5) translation equivariance.
            draw(y);
            {
                const TestSet B = A.translated(y);
                for (int i = 0; i < d; ++i) z[i] = x[i] + y[i];
                ++report.checks;
                if (std::abs(B.rho(z) - rx) > opts.tol * (1.0 + std::abs(rx)))
                    flag("A5", idx, "rho not translation-equivariant at " + detail::point_str(x));
            }

            // (A6) scaling subadditivity |rho_{qA}(qx)| <= q |rho_A(x)|.
            {
                const double q = rng.uniform(1.0, 3.0);
                const TestSet B = A.scaled(q);
                for (int i = 0; i < d; ++i) z[i] = q * x[i];
                ++report.checks;
                if (std::abs(B.rho(z)) > q * std::abs(rx) + opts.tol)
                    flag("A6", idx, "scaling bound failed at " + detail::point_str(x) +
                                        " q=" + std::to_string(q));
            }

            // (A7) non-expansiveness on {rho >= 0}.
            draw(y);
            const double ry = A.rho(y);
            if (rx >= 0.0 && ry >= 0.0) {
                ++report.checks;
                if (std::abs(rx - ry) > detail::norm_diff(x, y) + opts.tol)
                    flag("A7", idx, "expansive pair " + detail::point_str(x) + " " + detail::point_str(y));
            }

            // (A8) gradient modulus with the claimed kappa.
            if (rx > opts.fd_depth_min && ry > opts.fd_depth_min) {
                const bool pair_ok =
                    A.kind() != SetKind::IntervalUnion || detail::same_positive_component(A, x[0], y[0]);
                const double h = 1e-6;
                if (pair_ok && A.seam_distance(x) > 8.0 * h && A.seam_distance(y) > 8.0 * h) {
                    const double dxy = detail::norm_diff(x, y);
                    if (dxy > 1e-9) {
                        const std::vector<double> gx = detail::rho_gradient_fd(A, x, h);
                        const std::vector<double> gy = detail::rho_gradient_fd(A, y, h);
                        const double kappa = A.kappa() * opts.kappa_factor;
                        const double lhs = detail::norm_diff(gx, gy);
                        const double rhs = kappa * dxy / std::min(rx, ry);
                        ++report.checks;
                        if (lhs > rhs + 1e-5)
                            flag("A8", idx, "gradient modulus " + std::to_string(lhs) + " > " +
                                                std::to_string(rhs) + " at " + detail::point_str(x) +
                                                " " + detail::point_str(y));
                    }
                }
            }

            // (A2) offsets stay in the class; sampled sublevel identity.
            {
                const double off = rng.uniform(-2.0, 2.0);
                const OffsetResult R = offset_set(A, off);
                draw(z);
                const double rz = A.rho(z);
                if (std::abs(rz - off) > 1e-9) {
                    ++report.checks;
                    if ((rz <= off) != R.contains(z))
                        flag("A2", idx, "sublevel mismatch at t=" + std::to_string(off) + " x=" +
                                            detail::point_str(z));
                }
                // Offset monotonicity.
                const double off2 = rng.uniform(-2.0, 2.0);
                const OffsetResult R2 = offset_set(A, std::max(off, off2));
                const OffsetResult R1 = offset_set(A, std::min(off, off2));
                ++report.checks;
                if (R1.contains(z) && !R2.contains(z))
                    flag("A2", idx, "offset monotonicity failed at " + detail::point_str(z));
                // Erosions preserve surviving midpoints.
                if (A.kind() == SetKind::IntervalUnion && std::min(off, off2) < 0.0 && R1.is_set()) {
                    ++report.checks;
                    bool all_found = true;
                    for (const auto& I : R1.set->intervals()) {
                        const double m = 0.5 * (I.lo + I.hi);
                        bool found = false;
                        for (const auto& J : A.intervals())
                            if (std::abs(0.5 * (J.lo + J.hi) - m) < 1e-9) found = true;
                        all_found = all_found && found;
                    }
                    if (!all_found) flag("A2", idx, "erosion moved an interval midpoint");
                }
            }

            // (A3) erosion-dilation containment.
            {
                const double eps = rng.uniform(0.05, 1.5);
                const OffsetResult B = offset_set(A, -eps);
                if (B.is_set()) {
                    draw(z);
                    if (B.set->rho(z) < eps - 1e-9) {
                        ++report.checks;
                        if (A.rho(z) > 1e-9)
                            flag("A3", idx, "eroded eps-neighborhood escaped A at " +
                                                detail::point_str(z) + " eps=" + std::to_string(eps));
                    }
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Class perimeter bound and random families
// ---------------------------------------------------------------------------

// gamma* bound for the interval-union class with midpoint separation delta.
inline double interval_union_perimeter_bound(double delta) {
    if (!(delta > 0.0)) throw std::domain_error("interval_union_perimeter_bound: delta > 0 required");
    return 16.0 / std::sqrt(2.0 * M_PI) + 4.0 / delta;
}

inline TestSet random_half_space(int d, Rng& rng) {
    return TestSet::half_space(rng.sphere(d), rng.uniform(-2.0, 2.0));
}

inline TestSet random_ball(int d, Rng& rng) {
    std::vector<double> c(d);
    for (double& v : c) v = rng.uniform(-1.0, 1.0);
    return TestSet::ball(std::move(c), rng.uniform(0.3, 2.5));
}

inline TestSet random_interval_union(Rng& rng) {
    const int m = 1 + static_cast<int>(rng.uniform(0.0, 4.0));
    std::vector<Interval> iv;
    double cursor = rng.uniform(-3.0, 0.0);
    for (int j = 0; j < m; ++j) {
        const double len = rng.uniform(0.2, 2.2);
        iv.push_back({cursor, cursor + len});
        cursor += len + rng.uniform(0.3, 3.0);
    }
    double delta = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < m; ++j) {
        const double m0 = 0.5 * (iv[j].lo + iv[j].hi);
        const double m1 = 0.5 * (iv[j + 1].lo + iv[j + 1].hi);
        delta = std::min(delta, m1 - m0);
    }
    if (m == 1) delta = 1.0;
    return TestSet::interval_union(std::move(iv), delta);
}

// count sets of one variant; dimensions cycle through {1,2,3} where relevant.
inline std::vector<TestSet> random_family(const std::string& variant, int count,
                                          std::uint64_t seed) {
    Rng rng(seed, 0xFA111ULL);
    std::vector<TestSet> fam;
    fam.reserve(count);
    for (int i = 0; i < count; ++i) {
        if (variant == "half-space")
            fam.push_back(random_half_space(1 + i % 3, rng));
        else if (variant == "ball")
            fam.push_back(random_ball(1 + i % 3, rng));
        else if (variant == "interval-union")
            fam.push_back(random_interval_union(rng));
        else
            throw std::invalid_argument("random_family: unknown variant '" + variant + "'");
    }
    return fam;
}

}  // namespace clbound
