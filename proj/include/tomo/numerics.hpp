#pragma once
// Shared numeric kernels: deterministic reductions, entropy, mutual
// information on uniform grids, peak finding.
//
// Conventions used throughout:
//   - entropies are in bits (log base 2), 0*log(0) == 0
//   - densities below kZeroFloor are treated as exact zeros
//   - reductions are pairwise with a fixed recursion tree, so results do
//     not depend on accumulation order or thread count

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tomo {

inline constexpr double kEpsNum = 1e-9;       // MI negativity guard
inline constexpr double kZeroFloor = 1e-300;  // exact-zero cutoff for densities
inline constexpr double kSchmidtCut = 1e-14;  // singular values below are zero

// thrown when a numerical invariant is violated; CLI maps this to exit 2
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(std::span<const double> x) {
    return pairwise_sum(x.data(), x.size());
}

// -p log2 p with the 0 log 0 == 0 convention
inline double neg_plog2p(double p) {
    return p > kZeroFloor ? -p * std::log2(p) : 0.0;
}

// Shannon entropy of a probability vector (assumed normalized)
inline double entropy_discrete(std::span<const double> p) {
    std::vector<double> t(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) t[i] = neg_plog2p(p[i]);
    return pairwise_sum(t);
}

// differential entropy of density samples on uniform cells of measure `cell`:
//   S = -sum_i w_i log2(w_i) * cell
inline double entropy_density(std::span<const double> w, double cell) {
    std::vector<double> t(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) t[i] = neg_plog2p(w[i]);
    return pairwise_sum(t) * cell;
}

struct MiResult {
    double mi = 0.0;
    double s_a = 0.0;   // first-axis marginal entropy
    double s_b = 0.0;
    double s_ab = 0.0;  // joint entropy
    double mass = 0.0;  // raw integral of the input before renormalization
};

// Mutual information of a joint density on a uniform rectangular grid.
// `w` is row-major with n_a rows (first subsystem) and n_b columns; cell
// measure is h_a*h_b. The grid is renormalized internally. Marginals are
// derived from the same grid, which makes the result a discrete mutual
// information in disguise; it cannot go below -O(1e-13) and anything under
// -kEpsNum is a hard error.
inline MiResult mutual_information_grid(std::span<const double> w,
                                        std::size_t n_a, std::size_t n_b,
                                        double h_a, double h_b) {
    if (w.size() != n_a * n_b)
        throw std::invalid_argument("mutual_information_grid: size mismatch");
    MiResult r;
    const double cell = h_a * h_b;
    r.mass = pairwise_sum(w) * cell;
    if (!(r.mass > 0.0) || !std::isfinite(r.mass))
        throw invariant_error("mutual_information_grid: non-positive mass");

    std::vector<double> W(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double v = w[i] / r.mass;
        W[i] = v > kZeroFloor ? v : 0.0;
    }

    std::vector<double> ma(n_a), mb(n_b, 0.0);
    for (std::size_t i = 0; i < n_a; ++i)
        ma[i] = pairwise_sum(W.data() + i * n_b, n_b) * h_b;
    // column sums pairwise over a transposed copy, keeps the reduction deterministic
    std::vector<double> col(n_a);
    for (std::size_t j = 0; j < n_b; ++j) {
        for (std::size_t i = 0; i < n_a; ++i) col[i] = W[i * n_b + j];
        mb[j] = pairwise_sum(col) * h_a;
    }

    r.s_ab = entropy_density(W, cell);
    r.s_a = entropy_density(ma, h_a);
    r.s_b = entropy_density(mb, h_b);
    r.mi = r.s_a + r.s_b - r.s_ab;
    if (r.mi < -kEpsNum)
        throw invariant_error("mutual information negative beyond tolerance: " +
                              std::to_string(r.mi));
    return r;
}

// discrete joint probability table, cell measure 1
inline MiResult mutual_information_table(std::span<const double> p,
                                         std::size_t n_a, std::size_t n_b) {
    return mutual_information_grid(p, n_a, n_b, 1.0, 1.0);
}

struct Peak {
    double x;
    double y;
};

// Strict local maxima above rel_threshold * global max, with 3-point
// parabolic refinement of both position and height. xs must be uniform.
inline std::vector<Peak> find_peaks(std::span<const double> xs,
                                    std::span<const double> ys,
                                    double rel_threshold = 1e-3) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("find_peaks: bad input");
    double ymax = ys[0];
    for (double v : ys) ymax = std::max(ymax, v);
    const double floor = rel_threshold * ymax;
    std::vector<Peak> out;
    const double h = xs[1] - xs[0];
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (!(ys[i] > ys[i - 1] && ys[i] > ys[i + 1] && ys[i] > floor)) continue;
        const double denom = ys[i - 1] - 2.0 * ys[i] + ys[i + 1];
        double dx = 0.0, yp = ys[i];
        if (denom < 0.0) {
            dx = 0.5 * (ys[i - 1] - ys[i + 1]) / denom;
            yp = ys[i] - 0.25 * (ys[i - 1] - ys[i + 1]) * dx;
        }
        out.push_back({xs[i] + dx * h, yp});
    }
    return out;
}

// Fundamental spacing of a comb: median adjacent difference over the peaks
// that qualify as teeth (height >= tooth_rel of the tallest). Sidelobes of a
// truncated comb are genuine local maxima but sit well under the tooth
// threshold, so they do not enter the spacing statistic.
inline double comb_spacing(const std::vector<Peak>& peaks, double tooth_rel = 0.1) {
    double ymax = 0.0;
    for (const auto& p : peaks) ymax = std::max(ymax, p.y);
    std::vector<double> xs;
    for (const auto& p : peaks)
        if (p.y >= tooth_rel * ymax) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    if (xs.size() < 2) throw invariant_error("comb_spacing: fewer than two teeth");
    std::vector<double> d(xs.size() - 1);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) d[i] = xs[i + 1] - xs[i];
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    return m % 2 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> x(n);
    const double h = n > 1 ? (hi - lo) / double(n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = lo + h * double(i);
    return x;
}

// square joint-density grid; both axes are lo + i*h, w is row-major n*n
struct SquareGrid {
    std::size_t n = 0;
    double lo = 0.0;
    double h = 0.0;
    std::vector<double> w;

    double at(std::size_t i, std::size_t j) const { return w[i * n + j]; }
    double axis(std::size_t i) const { return lo + h * double(i); }
};

// max |a - b| after scaling each grid to unit peak; grids must share axes
inline double linf_peak_normalized(const SquareGrid& a, const SquareGrid& b) {
    if (a.n != b.n || a.w.size() != b.w.size())
        throw std::invalid_argument("linf_peak_normalized: grid mismatch");
    double pa = 0.0, pb = 0.0;
    for (double v : a.w) pa = std::max(pa, v);
    for (double v : b.w) pb = std::max(pb, v);
    if (!(pa > 0.0) || !(pb > 0.0))
        throw invariant_error("linf_peak_normalized: empty grid");
    double m = 0.0;
    for (std::size_t i = 0; i < a.w.size(); ++i)
        m = std::max(m, std::abs(a.w[i] / pa - b.w[i] / pb));
    return m;
}

}  // namespace tomo
