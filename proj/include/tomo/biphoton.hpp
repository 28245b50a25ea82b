#pragma once
// Biphoton frequency comb: time-time tomogram slices of the two comb states
// and their entanglement indicator.
//
// Both states have slice densities that depend only on tau = t_I - t_S:
//   alpha: w ~ exp(-env_coef tau^2) |F(tau)|^4
//   beta:  w ~ exp(-env_coef tau^2) |G(tau) F(tau)|^2
// with F(tau) = sum_n e^{i n tau rate}, G the alternating-sign variant,
// n in [-N, N], rate = spacing * K / 2, K = env_width^2 / (width^2 +
// env_width^2). The comb factors repeat with period 2 pi / rate
// (104.17 ps at the default parameters); |F| peaks at multiples of the
// period, |G| halfway between.
//
// The closed forms above assume equal tooth weights and drop the pump
// envelope's per-tooth weighting. fourier_oracle_slice rebuilds the slice
// from an explicit frequency-domain amplitude instead and exists to check
// them: in matched mode it places Gaussian teeth at nu * spacing with the
// combinatorial weights the closed forms imply; in physical mode it
// evaluates the pump-centered amplitude with the true tooth parity, which
// displaces the beta comb by a quarter period and suppresses its tau = 0
// peak.

#include <complex>
#include <numbers>
#include <vector>

#include "numerics.hpp"
#include "threads.hpp"

namespace tomo {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CombParams {
    double pump = kTwoPi * 391.8856e12;       // rad/s
    double spacing = kTwoPi * 19.2e9;         // comb tooth spacing
    double width = kTwoPi * 1.92e9;           // tooth width
    double env_center = kTwoPi * 10.9e12;     // pump envelope center offset
    double env_width = kTwoPi * 6e12;         // pump envelope width
    int n_teeth = 9;                          // teeth kept per side: n in [-N, N]

    double schmidt_k() const {
        const double w2 = width * width, e2 = env_width * env_width;
        return e2 / (w2 + e2);
    }
    double phase_rate() const { return spacing * schmidt_k() / 2.0; }
    double period() const { return kTwoPi / phase_rate(); }
    double env_coef() const {
        const double w2 = width * width, e2 = env_width * env_width;
        return w2 * e2 / (2.0 * (w2 + e2));
    }

    void validate() const {
        if (!(pump > 0 && spacing > 0 && width > 0 && env_width > 0))
            throw std::invalid_argument("comb frequencies must be positive");
        if (n_teeth < 1 || n_teeth > 64)
            throw std::invalid_argument("n_teeth must be in [1, 64]");
        if (!(width < spacing / 4.0))
            throw std::invalid_argument("teeth must be resolved: width < spacing/4");
    }
};

enum class CombState { alpha, beta };

inline const char* to_string(CombState s) {
    return s == CombState::alpha ? "alpha" : "beta";
}

inline std::complex<double> comb_f(double tau, const CombParams& p) {
    std::complex<double> acc(0.0, 0.0);
    const double r = p.phase_rate();
    for (int n = -p.n_teeth; n <= p.n_teeth; ++n)
        acc += std::polar(1.0, double(n) * tau * r);
    return acc;
}

inline std::complex<double> comb_g(double tau, const CombParams& p) {
    std::complex<double> acc(0.0, 0.0);
    const double r = p.phase_rate();
    for (int n = -p.n_teeth; n <= p.n_teeth; ++n) {
        const double sign = (n & 1) ? -1.0 : 1.0;
        acc += sign * std::polar(1.0, double(n) * tau * r);
    }
    return acc;
}

// unnormalized slice profile at separation tau
inline double profile_value(CombState s, double tau, const CombParams& p) {
    const double env = std::exp(-tau * tau * p.env_coef());
    const double f2 = std::norm(comb_f(tau, p));
    if (s == CombState::alpha) return env * f2 * f2;
    return env * std::norm(comb_g(tau, p)) * f2;
}

struct TimeWindow {
    double half_width;  // slice covers [-T, T] per axis, seconds
    int n_grid;         // points per axis

    double step() const { return 2.0 * half_width / double(n_grid - 1); }

    void validate(const CombParams& p) const {
        if (n_grid < 64) throw std::invalid_argument("n_grid must be >= 64");
        if (!(half_width >= 5.0 / p.width))
            throw std::invalid_argument("window too small: T >= 5/width required");
        if (!(step() <= p.period() / 16.0))
            throw invariant_error("time grid too coarse to resolve the comb period");
    }
};

inline TimeWindow default_window(const CombParams& p, double t_over_width = 10.0,
                                 int n_grid = 4096) {
    return TimeWindow{t_over_width / p.width, n_grid};
}

// ------------------------------------------------------------- profiles --

// tau grid underlying an n x n slice: tau_d = d * h, d in [-(n-1), n-1]
inline std::vector<double> tau_points(const TimeWindow& w) {
    const int n = w.n_grid;
    std::vector<double> tau(2 * n - 1);
    for (int d = -(n - 1); d <= n - 1; ++d) tau[d + n - 1] = double(d) * w.step();
    return tau;
}

inline std::vector<double> closed_form_profile(CombState s, const TimeWindow& w,
                                               const CombParams& p) {
    const std::vector<double> tau = tau_points(w);
    std::vector<double> rho(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) rho[i] = profile_value(s, tau[i], p);
    return rho;
}

// expand a tau profile into the unit-mass slice w(t_S, t_I) = rho(t_I - t_S)/Z
inline SquareGrid slice_from_profile(const std::vector<double>& rho, const TimeWindow& w,
                                     int threads = 1) {
    const std::size_t n = std::size_t(w.n_grid);
    if (rho.size() != 2 * n - 1)
        throw std::invalid_argument("slice_from_profile: profile length mismatch");
    const double h = w.step();
    std::vector<double> cnt_rho(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const double d = std::abs(double(k) - double(n - 1));
        cnt_rho[k] = (double(n) - d) * rho[k];
    }
    const double mass = pairwise_sum(cnt_rho) * h * h;
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw invariant_error("slice_from_profile: non-positive mass");
    SquareGrid out{n, -w.half_width, h, std::vector<double>(n * n)};
    parallel_rows(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.w[i * n + j] = rho[(n - 1) + j - i] / mass;
    });
    return out;
}

inline SquareGrid closed_form_slice(CombState s, const TimeWindow& w, const CombParams& p,
                                    int threads = 1) {
    p.validate();
    w.validate(p);
    return slice_from_profile(closed_form_profile(s, w, p), w, threads);
}

inline SquareGrid slice_difference(const SquareGrid& a, const SquareGrid& b) {
    if (a.n != b.n || a.lo != b.lo || a.h != b.h)
        throw std::invalid_argument("slice_difference: grid mismatch");
    SquareGrid out{a.n, a.lo, a.h, std::vector<double>(a.w.size())};
    for (std::size_t i = 0; i < a.w.size(); ++i) out.w[i] = std::abs(a.w[i] - b.w[i]);
    return out;
}

// ------------------------------------------------------ indicator (MI) --

struct TeiResult {
    double mi = 0.0;
    double s_a = 0.0;
    double s_ab = 0.0;
};

// Mutual information of the slice without materializing the n x n grid.
// Because the density is a function of tau only, the joint entropy reduces
// to a diagonal-count sum and the marginals to windowed prefix sums; the
// result is identical to mutual_information_grid on the expanded slice.
inline TeiResult tei_time_of_profile(const std::vector<double>& rho, const TimeWindow& w) {
    const std::size_t n = std::size_t(w.n_grid);
    if (rho.size() != 2 * n - 1)
        throw std::invalid_argument("tei_time_of_profile: profile length mismatch");
    const double h = w.step();

    std::vector<double> cnt(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k)
        cnt[k] = double(n) - std::abs(double(k) - double(n - 1));

    std::vector<double> t(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) t[k] = cnt[k] * rho[k];
    const double mass = pairwise_sum(t) * h * h;
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw invariant_error("tei_time_of_profile: non-positive mass");

    std::vector<double> W(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const double v = rho[k] / mass;
        W[k] = v > kZeroFloor ? v : 0.0;
    }
    for (std::size_t k = 0; k < rho.size(); ++k) t[k] = cnt[k] * neg_plog2p(W[k]);
    const double s_ab = pairwise_sum(t) * h * h;

    // marginal at axis index i integrates W over d in [-i, n-1-i]
    std::vector<double> csum(W.size() + 1, 0.0);
    for (std::size_t k = 0; k < W.size(); ++k) csum[k + 1] = csum[k] + W[k];
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = (n - 1) - i;
        m[i] = h * (csum[lo + n] - csum[lo]);
    }
    const double s_a = entropy_density(m, h);

    TeiResult r{2.0 * s_a - s_ab, s_a, s_ab};
    if (r.mi < -kEpsNum)
        throw invariant_error("tei_time: mutual information negative beyond tolerance");
    return r;
}

inline TeiResult tei_time(CombState s, const TimeWindow& w, const CombParams& p) {
    p.validate();
    w.validate(p);
    return tei_time_of_profile(closed_form_profile(s, w, p), w);
}

// -------------------------------------------------------- Fourier oracle --

struct OracleOptions {
    bool matched = true;     // teeth recentered at nu*spacing with combinatorial
                             // weights (the closed forms' implicit assumption);
                             // false: physical pump-centered amplitude
    bool envelope = false;   // multiply in the pump spectral envelope
    double widen = 1.0;      // envelope width multiplier when included
};

namespace detail {

// tooth train evaluated via the nearest tooth index, images |j| <= 6
inline double cavity_comb(double wfreq, const CombParams& p, bool alternating) {
    const double k0 = std::round(wfreq / p.spacing);
    const double r = wfreq - k0 * p.spacing;
    double acc = 0.0;
    for (int j = -6; j <= 6; ++j) {
        const double dx = r - double(j) * p.spacing;
        double term = std::exp(-dx * dx / (2.0 * p.width * p.width));
        if (alternating) {
            const long long k = (long long)(k0) + j;
            if (k & 1LL) term = -term;
        }
        acc += term;
    }
    return acc;
}

}  // namespace detail

// 1-D frequency-domain amplitude sampled on a uniform grid
struct OmegaGrid {
    double lo = 0.0;
    double step = 0.0;
    std::vector<double> A;
};

inline OmegaGrid oracle_amplitude(CombState s, const CombParams& p,
                                  const OracleOptions& o) {
    OmegaGrid g;
    g.step = p.width / 8.0;
    if (o.matched) {
        const int N = p.n_teeth;
        const double span = double(2 * N + 8) * p.spacing;
        g.lo = -span;
        const std::size_t cnt = std::size_t(std::ceil(2.0 * span / g.step));
        g.A.assign(cnt, 0.0);
        for (int nu = -2 * N; nu <= 2 * N; ++nu) {
            double c;
            if (s == CombState::alpha) {
                c = double(2 * N + 1 - std::abs(nu));
            } else {
                c = 0.0;
                for (int n = std::max(-N, nu - N); n <= std::min(N, nu + N); ++n)
                    c += (n & 1) ? -1.0 : 1.0;
            }
            if (c == 0.0) continue;
            const double center = double(nu) * p.spacing;
            for (std::size_t i = 0; i < cnt; ++i) {
                const double om = g.lo + g.step * double(i);
                const double dx = om - center;
                g.A[i] += c * std::exp(-dx * dx / (4.0 * p.width * p.width));
            }
        }
        if (o.envelope) {
            const double ww = p.env_width * o.widen;
            for (std::size_t i = 0; i < cnt; ++i) {
                const double om = g.lo + g.step * double(i);
                g.A[i] *= std::exp(-om * om / (4.0 * ww * ww));
            }
        }
    } else {
        // span keeps the outer tenth of the grid below 1e-6 of the spectrum
        // mass; physical mode needs the envelope, an unweighted tooth train
        // never decays into the guard band
        const double ww = p.env_width * o.widen;
        const double span = 7.0 * ww;
        g.lo = p.env_center - span;
        const std::size_t cnt = std::size_t(std::ceil(2.0 * span / g.step));
        g.A.assign(cnt, 0.0);
        for (std::size_t i = 0; i < cnt; ++i) {
            const double om = g.lo + g.step * double(i);
            const double w_s = (p.pump + om) / 2.0;
            const double w_i = (p.pump - om) / 2.0;
            const double fm =
                o.envelope ? std::exp(-(om - p.env_center) * (om - p.env_center) /
                                      (4.0 * ww * ww))
                           : 1.0;
            const double c_s = detail::cavity_comb(w_s, p, s == CombState::beta);
            g.A[i] = fm * c_s * detail::cavity_comb(w_i, p, false);
        }
    }
    return g;
}

// |psi(tau)|^2 with psi(tau) = sum_Omega A(Omega) e^{-i Omega tau / 2} step
inline std::vector<double> oracle_profile(CombState s, const std::vector<double>& tau,
                                          const CombParams& p, const OracleOptions& o,
                                          int threads = 1) {
    const OmegaGrid g = oracle_amplitude(s, p, o);

    // the sampled amplitude must decay inside the grid and resolve every
    // requested tau; e^{-i Omega tau/2} aliases with tau period 4 pi / step
    double tail = 0.0, total = 0.0;
    const std::size_t tenth = g.A.size() / 10;
    for (std::size_t i = 0; i < g.A.size(); ++i) {
        const double e = g.A[i] * g.A[i];
        total += e;
        if (i < tenth || i + tenth >= g.A.size()) tail += e;
    }
    if (!(total > 0.0) || tail > 1e-6 * total)
        throw invariant_error("oracle frequency grid does not contain the spectrum");
    double tau_max = 0.0;
    for (double t : tau) tau_max = std::max(tau_max, std::abs(t));
    if (tau_max > kTwoPi / g.step)
        throw invariant_error("oracle frequency grid too coarse for requested times");

    std::vector<double> rho(tau.size());
    parallel_rows(tau.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t i = 0; i < g.A.size(); ++i) {
                const double om = g.lo + g.step * double(i);
                acc += g.A[i] * std::polar(1.0, -om * tau[k] / 2.0);
            }
            rho[k] = std::norm(acc * g.step);
        }
    });
    return rho;
}

inline SquareGrid fourier_oracle_slice(CombState s, const TimeWindow& w,
                                       const CombParams& p, const OracleOptions& o,
                                       int threads = 1) {
    p.validate();
    w.validate(p);
    return slice_from_profile(oracle_profile(s, tau_points(w), p, o, threads), w, threads);
}

// --------------------------------------------------------- diagnostics --

// closed-form comb spacing from peak finding on a fine tau scan
inline double closed_form_peak_spacing(CombState s, const CombParams& p, double half_range,
                                       std::size_t n_scan = 200001) {
    const std::vector<double> tau = linspace(-half_range, half_range, n_scan);
    std::vector<double> rho(n_scan);
    for (std::size_t i = 0; i < n_scan; ++i) rho[i] = profile_value(s, tau[i], p);
    return comb_spacing(find_peaks(tau, rho));
}

// analytic value of the profile integral over all tau (equal-weight comb):
// (pi / mu0) sum_d (+-1)^d (M - |d|)^2 with M = 2N+1 teeth,
// mu0 = sqrt(pi * env_width^2 width^2 / (2 (env_width^2 + width^2)))
inline double normalization_analytic(CombState s, const CombParams& p) {
    const int M = 2 * p.n_teeth + 1;
    double tot = 0.0;
    for (int d = -(M - 1); d <= M - 1; ++d) {
        const double cnt = double(M - std::abs(d));
        double term = cnt * cnt;
        if (s == CombState::beta && (d & 1)) term = -term;
        tot += term;
    }
    const double w2 = p.width * p.width, e2 = p.env_width * p.env_width;
    const double mu0 = std::sqrt(std::numbers::pi * e2 * w2 / (2.0 * (e2 + w2)));
    return std::numbers::pi / mu0 * tot;
}

// trapezoid integral of the profile over +-30/width
inline double normalization_integral(CombState s, const CombParams& p,
                                     std::size_t n = 400001) {
    const double T = 30.0 / p.width;
    const std::vector<double> tau = linspace(-T, T, n);
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = profile_value(s, tau[i], p);
    rho.front() *= 0.5;
    rho.back() *= 0.5;
    return pairwise_sum(rho) * (tau[1] - tau[0]);
}

}  // namespace tomo
