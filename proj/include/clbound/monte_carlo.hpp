#pragma once

// Simulation of normalized sums W = sum_i X_i against the Gaussian over a
// test-set family, with exact lattice enumeration when the atom count
// permits, plus the annulus inequality check for non-standard Gaussians.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <thread>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "constants.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "special_functions.hpp"

namespace clbound {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// ---------------------------------------------------------------------------
// Summand families
// ---------------------------------------------------------------------------

enum class SummandKind { RademacherAxes, UniformSphere, TwoPointAsymmetric };

inline const char* summand_kind_name(SummandKind k) {
    switch (k) {
        case SummandKind::RademacherAxes: return "rademacher-axes";
        case SummandKind::UniformSphere: return "uniform-sphere";
        case SummandKind::TwoPointAsymmetric: return "two-point-asymmetric";
    }
    return "?";
}

inline SummandKind summand_kind_from_name(const std::string& s) {
    if (s == "rademacher-axes") return SummandKind::RademacherAxes;
    if (s == "uniform-sphere") return SummandKind::UniformSphere;
    if (s == "two-point-asymmetric") return SummandKind::TwoPointAsymmetric;
    throw std::invalid_argument("unknown summand kind: " + s);
}

// Sum of n independent mean-zero vectors with total covariance I_d.
struct SummandSpec {
    SummandKind kind = SummandKind::RademacherAxes;
    int d = 1;
    long n = 1;
    double p = 0.5;  // TwoPointAsymmetric success probability

    void validate() const {
        if (d < 1) throw std::invalid_argument("SummandSpec: d >= 1 required");
        if (n < d) throw std::invalid_argument("SummandSpec: n >= d required");
        if (kind == SummandKind::TwoPointAsymmetric && !(p > 0.0 && p < 1.0))
            throw std::invalid_argument("SummandSpec: p in (0,1) required");
    }

    // n split across axes as evenly as possible (axis j feeds coordinate j).
    std::vector<long> axis_counts() const {
        std::vector<long> c(d);
        for (int j = 0; j < d; ++j) c[j] = n / d + (j < n % d ? 1 : 0);
        return c;
    }

    // beta = sum_i E|X_i|^3 in closed form.
    double lyapunov_sum() const {
        validate();
        if (kind == SummandKind::UniformSphere)
            return std::pow(static_cast<double>(d), 1.5) / std::sqrt(static_cast<double>(n));
        double shape = 1.0;
        if (kind == SummandKind::TwoPointAsymmetric)
            shape = ((1.0 - p) * (1.0 - p) + p * p) / std::sqrt(p * (1.0 - p));
        double beta = 0.0;
        for (long nj : axis_counts()) beta += shape / std::sqrt(static_cast<double>(nj));
        return beta;
    }

    // Joint lattice size prod_j (n_j + 1), or nullopt for continuous laws.
    std::optional<std::uint64_t> lattice_atoms() const {
        if (kind == SummandKind::UniformSphere) return std::nullopt;
        std::uint64_t total = 1;
        for (long nj : axis_counts()) {
            const std::uint64_t m = static_cast<std::uint64_t>(nj) + 1;
            if (total > (std::uint64_t(1) << 40) / m) return std::uint64_t(1) << 41;
            total *= m;
        }
        return total;
    }
};

// Max deviation of sum_i Var(X_i) from I_d, accumulated term by term.
inline double covariance_deviation(const SummandSpec& spec) {
    spec.validate();
    std::vector<double> diag(spec.d, 0.0);
    if (spec.kind == SummandKind::UniformSphere) {
        // Var(sqrt(d/n) U) = (1/n) I_d per summand.
        for (long i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.d; ++j) diag[j] += 1.0 / static_cast<double>(spec.n);
    } else {
        const auto counts = spec.axis_counts();
        for (int j = 0; j < spec.d; ++j)
            for (long i = 0; i < counts[j]; ++i) diag[j] += 1.0 / static_cast<double>(counts[j]);
    }
    double dev = 0.0;
    for (double v : diag) dev = std::max(dev, std::abs(v - 1.0));
    return dev;  // off-diagonal terms vanish identically for all three kinds
}

// ---------------------------------------------------------------------------
// Gaussian measure of a test set
// ---------------------------------------------------------------------------

struct QmcEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t points = 0;
};

// Randomized quasi-Monte Carlo N(0,I_d){|x - c| <= r}: Halton points mapped
// through the normal quantile, error from independent Cranley-Patterson
// replicates.
inline QmcEstimate qmc_ball_measure(const std::vector<double>& center, double radius, int d,
                                    std::uint64_t points = 1000000, std::uint64_t seed = 0) {
    if (d < 1 || d > 12) throw std::domain_error("qmc_ball_measure: 1 <= d <= 12");
    const int replicates = 8;
    const std::uint64_t per = points / replicates;
    std::vector<double> est(replicates, 0.0);
    for (int rep = 0; rep < replicates; ++rep) {
        Halton seq(d, seed * 1000003ULL + rep);
        std::uint64_t inside = 0;
        std::vector<double> u, z(d);
        for (std::uint64_t i = 0; i < per; ++i) {
            u = seq.next();
            double dist2 = 0.0;
            for (int j = 0; j < d; ++j) {
                z[j] = normal_quantile(u[j]);
                const double dz = z[j] - center[j];
                dist2 += dz * dz;
            }
            if (dist2 <= radius * radius) ++inside;
        }
        est[rep] = static_cast<double>(inside) / static_cast<double>(per);
    }
    QmcEstimate out;
    out.points = per * replicates;
    for (double e : est) out.value += e;
    out.value /= replicates;
    double var = 0.0;
    for (double e : est) var += (e - out.value) * (e - out.value);
    var /= replicates * (replicates - 1.0);
    out.std_error = std::sqrt(var);
    return out;
}

// N(0, I_d){A}. Closed forms where available, QMC for off-center balls.
inline double normal_measure(const TestSet& A, int d) {
    if (A.dim() != d) throw std::invalid_argument("normal_measure: dimension mismatch");
    switch (A.kind()) {
        case SetKind::HalfSpace:
            return normal_cdf(A.offset());
        case SetKind::Ball: {
            double cnorm2 = 0.0;
            for (double c : A.center()) cnorm2 += c * c;
            if (cnorm2 <= 1e-28) return gamma_p(0.5 * d, 0.5 * A.radius() * A.radius());
            return qmc_ball_measure(A.center(), A.radius(), d).value;
        }
        case SetKind::IntervalUnion: {
            double acc = 0.0;
            for (const Interval& iv : A.intervals())
                acc += normal_cdf(iv.hi) - normal_cdf(iv.lo);
            return acc;
        }
    }
    throw std::logic_error("normal_measure: unhandled variant");
}

// N(mu, sigma^2 I_d){A} where closed forms exist (half-spaces, interval
// unions, balls centered at mu); returns nullopt otherwise.
inline std::optional<double> scaled_gaussian_measure(const TestSet& A,
                                                     const std::vector<double>& mu, double sigma) {
    switch (A.kind()) {
        case SetKind::HalfSpace: {
            double proj = 0.0;
            const auto& nrm = A.normal();
            for (std::size_t i = 0; i < nrm.size(); ++i) proj += nrm[i] * mu[i];
            return normal_cdf((A.offset() - proj) / sigma);
        }
        case SetKind::IntervalUnion: {
            double acc = 0.0;
            for (const Interval& iv : A.intervals())
                acc += normal_cdf((iv.hi - mu[0]) / sigma) - normal_cdf((iv.lo - mu[0]) / sigma);
            return acc;
        }
        case SetKind::Ball: {
            double off2 = 0.0;
            for (std::size_t i = 0; i < mu.size(); ++i) {
                const double dc = A.center()[i] - mu[i];
                off2 += dc * dc;
            }
            if (off2 > 1e-28) return std::nullopt;
            const double rs = A.radius() / sigma;
            return gamma_p(0.5 * A.dim(), 0.5 * rs * rs);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kExactAtomLimit = std::uint64_t(1) << 20;

struct SimulationConfig {
    SummandSpec spec;
    std::vector<TestSet> sets;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::optional<bool> exact;    // default: exact iff the lattice fits
    double k_constant = 0.0;      // 0 -> theorem1_bound(d)

    void validate() const {
        spec.validate();
        if (sets.empty()) throw std::invalid_argument("SimulationConfig: at least one set");
        for (const TestSet& s : sets)
            if (s.dim() != spec.d)
                throw std::invalid_argument("SimulationConfig: set dimension mismatch");
        const auto atoms = spec.lattice_atoms();
        const bool can_exact = atoms && *atoms <= kExactAtomLimit;
        if (exact && *exact && !can_exact)
            throw std::invalid_argument("SimulationConfig: exact enumeration not available");
        if (!(exact && *exact) && !can_exact && samples < 10000)
            throw std::invalid_argument("SimulationConfig: samples >= 10^4 required");
    }

    bool use_exact() const {
        if (exact) return *exact;
        const auto atoms = spec.lattice_atoms();
        return atoms && *atoms <= kExactAtomLimit;
    }
};

struct SetReport {
    std::string label;
    double p_hat = 0.0;
    double p_normal = 0.0;
    double abs_error = 0.0;
    double half_width = 0.0;
};

struct SimulationReport {
    SummandSpec spec;
    bool exact = false;
    std::uint64_t samples_used = 0;
    std::uint64_t seed = 0;
    std::vector<SetReport> sets;
    double sup_error = 0.0;        // grid-sup over the supplied family
    double sup_half_width = 0.0;   // half-width of the set attaining the sup
    std::string sup_label = "grid-sup";
    double lyapunov_sum = 0.0;
    double k_constant = 0.0;
    double bound = 0.0;
    bool pass = false;
};

inline std::string set_label(const TestSet& A) {
    char buf[160];
    switch (A.kind()) {
        case SetKind::HalfSpace:
            std::snprintf(buf, sizeof buf, "halfspace(offset=%.6g)", A.offset());
            return buf;
        case SetKind::Ball:
            std::snprintf(buf, sizeof buf, "ball(r=%.6g)", A.radius());
            return buf;
        case SetKind::IntervalUnion:
            std::snprintf(buf, sizeof buf, "intervals(k=%zu)", A.intervals().size());
            return buf;
    }
    return "?";
}

namespace detail {

// log C(n,k) with exact integers for small n.
inline double log_binomial(long n, long k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

struct AxisLattice {
    std::vector<double> values;
    std::vector<double> weights;
};

// Distribution of the per-axis normalized sum for a lattice kind.
inline AxisLattice axis_lattice(const SummandSpec& spec, long nj) {
    AxisLattice ax;
    ax.values.resize(nj + 1);
    ax.weights.resize(nj + 1);
    const double isq = 1.0 / std::sqrt(static_cast<double>(nj));
    if (spec.kind == SummandKind::RademacherAxes) {
        const double l2 = std::log(2.0);
        for (long k = 0; k <= nj; ++k) {
            ax.values[k] = (2.0 * k - nj) * isq;
            ax.weights[k] = std::exp(log_binomial(nj, k) - nj * l2);
        }
    } else {
        const double p = spec.p;
        const double a = -std::sqrt(p / (1.0 - p));            // failure value, unit variance
        const double b = std::sqrt((1.0 - p) / p);             // success value
        const double lp = std::log(p), lq = std::log1p(-p);
        for (long k = 0; k <= nj; ++k) {
            ax.values[k] = (k * b + (nj - k) * a) * isq;
            ax.weights[k] = std::exp(log_binomial(nj, k) + k * lp + (nj - k) * lq);
        }
    }
    return ax;
}

inline void sample_sum(const SummandSpec& spec, const std::vector<long>& counts, Rng& rng,
                       std::vector<double>& w) {
    std::fill(w.begin(), w.end(), 0.0);
    switch (spec.kind) {
        case SummandKind::RademacherAxes: {
            for (int j = 0; j < spec.d; ++j) {
                long ones = 0, left = counts[j];
                while (left > 0) {
                    const int take = static_cast<int>(std::min<long>(left, 64));
                    std::uint64_t bits = rng.next_u64();
                    if (take < 64) bits &= (std::uint64_t(1) << take) - 1;
                    ones += __builtin_popcountll(bits);
                    left -= take;
                }
                w[j] = (2.0 * ones - counts[j]) / std::sqrt(static_cast<double>(counts[j]));
            }
            break;
        }
        case SummandKind::TwoPointAsymmetric: {
            const double a = -std::sqrt(spec.p / (1.0 - spec.p));
            const double b = std::sqrt((1.0 - spec.p) / spec.p);
            for (int j = 0; j < spec.d; ++j) {
                long k = 0;
                for (long i = 0; i < counts[j]; ++i)
                    if (rng.next_double() < spec.p) ++k;
                w[j] = (k * b + (counts[j] - k) * a) / std::sqrt(static_cast<double>(counts[j]));
            }
            break;
        }
        case SummandKind::UniformSphere: {
            const double scale = std::sqrt(static_cast<double>(spec.d) / spec.n);
            std::vector<double> u;
            for (long i = 0; i < spec.n; ++i) {
                u = rng.sphere(spec.d);
                for (int j = 0; j < spec.d; ++j) w[j] += scale * u[j];
            }
            break;
        }
    }
}

}  // namespace detail

// 99% Wilson score half-width for count successes out of n.
inline double wilson_half_width_99(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) return 1.0;
    const double z = 2.5758293035489004;
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2n = z * z / nn;
    return (z / (1.0 + z2n)) * std::sqrt(phat * (1.0 - phat) / nn + z * z / (4.0 * nn * nn));
}

inline SimulationReport run_simulation(const SimulationConfig& cfg) {
    cfg.validate();
    const SummandSpec& spec = cfg.spec;
    SimulationReport rep;
    rep.spec = spec;
    rep.seed = cfg.seed;
    rep.exact = cfg.use_exact();
    rep.lyapunov_sum = spec.lyapunov_sum();
    rep.k_constant = cfg.k_constant > 0.0 ? cfg.k_constant : theorem1_bound(spec.d).assembled;
    rep.bound = rep.k_constant * rep.lyapunov_sum;

    const std::size_t m = cfg.sets.size();
    std::vector<double> p_hat(m, 0.0), hw(m, 0.0);

    if (rep.exact) {
        const auto counts = spec.axis_counts();
        std::vector<detail::AxisLattice> axes;
        axes.reserve(spec.d);
        for (int j = 0; j < spec.d; ++j) axes.push_back(detail::axis_lattice(spec, counts[j]));
        std::vector<std::size_t> idx(spec.d, 0);
        std::vector<double> w(spec.d);
        bool done = false;
        while (!done) {
            double weight = 1.0;
            for (int j = 0; j < spec.d; ++j) {
                w[j] = axes[j].values[idx[j]];
                weight *= axes[j].weights[idx[j]];
            }
            for (std::size_t s = 0; s < m; ++s)
                if (cfg.sets[s].contains(w)) p_hat[s] += weight;
            int j = 0;
            for (; j < spec.d; ++j) {
                if (++idx[j] <= static_cast<std::size_t>(counts[j])) break;
                idx[j] = 0;
            }
            done = (j == spec.d);
        }
        rep.samples_used = *spec.lattice_atoms();
    } else {
        const int blocks = 16;
        const auto counts = spec.axis_counts();
        auto worker = [&](int b) {
            std::uint64_t quota = cfg.samples / blocks +
                                  (static_cast<std::uint64_t>(b) < cfg.samples % blocks ? 1 : 0);
            Rng rng(cfg.seed, static_cast<std::uint64_t>(b));
            std::vector<std::uint64_t> hits(m, 0);
            std::vector<double> w(spec.d);
            for (std::uint64_t i = 0; i < quota; ++i) {
                detail::sample_sum(spec, counts, rng, w);
                for (std::size_t s = 0; s < m; ++s)
                    if (cfg.sets[s].contains(w)) ++hits[s];
            }
            return hits;
        };
        int workers = static_cast<int>(std::thread::hardware_concurrency());
        if (const char* env = std::getenv("CLBOUND_WORKERS")) workers = std::atoi(env);
        workers = std::clamp(workers, 1, blocks);
        // Substreams are tied to block indices, not workers, so the result is
        // identical for any worker count.
        auto span = [&](int t) {
            std::vector<std::uint64_t> acc(m, 0);
            for (int b = t; b < blocks; b += workers) {
                const auto part = worker(b);
                for (std::size_t s = 0; s < m; ++s) acc[s] += part[s];
            }
            return acc;
        };
        std::vector<std::future<std::vector<std::uint64_t>>> futs;
        for (int t = 1; t < workers; ++t)
            futs.push_back(std::async(std::launch::async, span, t));
        std::vector<std::uint64_t> hits = span(0);
        for (auto& f : futs) {
            const auto part = f.get();
            for (std::size_t s = 0; s < m; ++s) hits[s] += part[s];
        }
        rep.samples_used = cfg.samples;
        for (std::size_t s = 0; s < m; ++s) {
            p_hat[s] = static_cast<double>(hits[s]) / static_cast<double>(cfg.samples);
            hw[s] = wilson_half_width_99(hits[s], cfg.samples);
        }
    }

    double worst = -1.0;
    for (std::size_t s = 0; s < m; ++s) {
        SetReport sr;
        sr.label = set_label(cfg.sets[s]);
        sr.p_hat = p_hat[s];
        sr.p_normal = normal_measure(cfg.sets[s], spec.d);
        sr.abs_error = std::abs(sr.p_hat - sr.p_normal);
        sr.half_width = hw[s];
        if (sr.abs_error > rep.sup_error) {
            rep.sup_error = sr.abs_error;
            rep.sup_half_width = sr.half_width;
        }
        worst = std::max(worst, sr.abs_error - sr.half_width);
        rep.sets.push_back(std::move(sr));
    }
    rep.pass = worst <= rep.bound;
    return rep;
}

// ---------------------------------------------------------------------------
// Exact half-line Kolmogorov distance for the d = 1 Rademacher sum
// ---------------------------------------------------------------------------

// sup_x |P(W <= x) - Phi(x)| over all half-lines, evaluated at atoms and
// their left limits.
inline double exact_kolmogorov_halfline(long n) {
    SummandSpec spec;
    spec.kind = SummandKind::RademacherAxes;
    spec.d = 1;
    spec.n = n;
    const auto ax = detail::axis_lattice(spec, n);
    double sup = 0.0, cdf = 0.0;
    for (std::size_t k = 0; k < ax.values.size(); ++k) {
        const double target = normal_cdf(ax.values[k]);
        sup = std::max(sup, std::abs(cdf - target));  // left limit at the atom
        cdf += ax.weights[k];
        sup = std::max(sup, std::abs(cdf - target));
    }
    return sup;
}

// ---------------------------------------------------------------------------
// Annulus inequality for non-standard Gaussians
// ---------------------------------------------------------------------------

struct AnnulusEntry {
    double eps = 0.0;
    double outer = 0.0;        // N{A^{eps} \ A}
    double inner = 0.0;        // N{A \ A^{-eps}}
    double half_width = 0.0;   // 0 for closed-form entries
    double bound = 0.0;        // gamma_star * eps / sigma
    bool ok = false;
};

struct AnnulusReport {
    std::vector<AnnulusEntry> entries;
    double worst_ratio = 0.0;  // max over entries of max(outer, inner)/eps
    bool all_ok = true;
};

// Checks N(mu, sigma^2 I){A^{eps|rho} \ A} <= gamma_star * eps / sigma (and
// the inner counterpart) over an eps grid; exact via scaled_gaussian_measure
// when available, otherwise seeded MC with a Wilson margin.
inline AnnulusReport annulus_inequality_check(const TestSet& A, double sigma,
                                              const std::vector<double>& mu,
                                              const std::vector<double>& eps_grid,
                                              double gamma_star_bound,
                                              std::uint64_t samples = 200000,
                                              std::uint64_t seed = 7) {
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::domain_error("annulus_inequality_check: sigma in (0,1] required");
    if (mu.size() != static_cast<std::size_t>(A.dim()))
        throw std::invalid_argument("annulus_inequality_check: mu dimension mismatch");

    AnnulusReport rep;
    const double base = scaled_gaussian_measure(A, mu, sigma).value_or(-1.0);
    const bool closed_form = base >= 0.0;

    for (double eps : eps_grid) {
        AnnulusEntry e;
        e.eps = eps;
        e.bound = gamma_star_bound * eps / sigma;
        if (closed_form) {
            const OffsetResult up = offset_set(A, eps);
            const OffsetResult dn = offset_set(A, -eps);
            const double m_up = up.kind == OffsetResult::Kind::Full ? 1.0
                                : up.kind == OffsetResult::Kind::Empty
                                    ? 0.0
                                    : scaled_gaussian_measure(*up.set, mu, sigma).value_or(-1.0);
            const double m_dn = dn.kind == OffsetResult::Kind::Full ? 1.0
                                : dn.kind == OffsetResult::Kind::Empty
                                    ? 0.0
                                    : scaled_gaussian_measure(*dn.set, mu, sigma).value_or(-1.0);
            if (m_up < 0.0 || m_dn < 0.0)
                throw std::logic_error("annulus_inequality_check: offset left closed form");
            e.outer = m_up - base;
            e.inner = base - m_dn;
        } else {
            Rng rng(seed, 0);
            std::uint64_t hit_outer = 0, hit_inner = 0;
            std::vector<double> x(A.dim());
            for (std::uint64_t i = 0; i < samples; ++i) {
                for (int j = 0; j < A.dim(); ++j) x[j] = mu[j] + sigma * rng.normal();
                const double r = A.rho(x);
                if (r > 0.0 && r <= eps) ++hit_outer;
                if (r > -eps && r <= 0.0) ++hit_inner;
            }
            e.outer = static_cast<double>(hit_outer) / static_cast<double>(samples);
            e.inner = static_cast<double>(hit_inner) / static_cast<double>(samples);
            e.half_width = std::max(wilson_half_width_99(hit_outer, samples),
                                    wilson_half_width_99(hit_inner, samples));
        }
        e.ok = std::max(e.outer, e.inner) - e.half_width <= e.bound + 1e-12;
        rep.worst_ratio = std::max(rep.worst_ratio, std::max(e.outer, e.inner) / eps);
        rep.all_ok = rep.all_ok && e.ok;
        rep.entries.push_back(e);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Standard set families
// ---------------------------------------------------------------------------

inline std::vector<TestSet> halfline_family(int count, double lo, double hi) {
    std::vector<TestSet> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double off = lo + (hi - lo) * i / (count - 1.0);
        out.push_back(TestSet::half_space({1.0}, off));
    }
    return out;
}

inline std::vector<TestSet> halfspace_family(int d, int count, std::uint64_t seed) {
    if (d == 1) return halfline_family(count, -3.0, 3.0);
    Rng rng(seed, 99);
    std::vector<TestSet> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i)
        out.push_back(TestSet::half_space(rng.sphere(d), rng.uniform(-2.5, 2.5)));
    return out;
}

inline std::vector<TestSet> ball_family(int d, int count) {
    std::vector<TestSet> out;
    out.reserve(count);
    const std::vector<double> origin(d, 0.0);
    for (int i = 0; i < count; ++i) {
        const double r = 0.25 + 3.25 * i / (count - 1.0);
        out.push_back(TestSet::ball(origin, r));
    }
    return out;
}

}  // namespace clbound
