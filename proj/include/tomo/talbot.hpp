#pragma once
// Entangled Talbot carpet: pair-coefficient matrix over grating slits,
// position tomogram slice, entanglement indicators, and the Bell-type I_D
// expression for two D-outcome measurements per side.
//
// Geometry. Slit pitch s = ell/D. Basis function d is a train of Gaussian
// apertures of width delta centered at d*s + m*ell, with image weights
// u_m = exp(-(2 pi m sigma)^2 / (2 ell^2)). At the default geometry
// (sigma = 0.05 ell, delta = 0.025 s) the patches of distinct d are
// separated by 40 delta, so the joint density factorizes into disjoint
// Gaussian patches whose D x D weight table carries all of the mutual
// information. tei_position uses that table directly; the grid routines
// build the same density by brute force and exist to cross-check it.

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

#include "numerics.hpp"
#include "threads.hpp"

namespace tomo {

struct TalbotParams {
    int D = 10;
    double R = 1.0;             // pair correlation, 0 (none) to 1 (perfect)
    double ell = 1.0;           // grating period
    double kappa_plus = 9.0;    // sum-coordinate width, units of ell
    double sigma = 0.05;        // source width, units of ell
    double delta = 0.025;       // slit width, units of s

    double s() const { return ell / D; }
    double sigma_abs() const { return sigma * ell; }
    double delta_abs() const { return delta * s(); }

    void validate() const {
        if (D < 2 || D > 12) throw std::invalid_argument("D must be in [2, 12]");
        if (!(R >= 0.0 && R <= 1.0)) throw std::invalid_argument("R must be in [0, 1]");
        if (!(ell > 0.0 && kappa_plus > 0.0 && sigma > 0.0 && delta > 0.0))
            throw std::invalid_argument("geometry parameters must be positive");
    }
};

// C_{d1 d2} ~ exp(-a (d1^2 - 2 R d1 d2 + d2^2)), Frobenius-normalized.
// a = s^2 / (2 kappa_+^2 (1-R)); R == 1 degenerates to identity / sqrt(D).
inline Eigen::MatrixXd coefficient_matrix(const TalbotParams& p) {
    p.validate();
    const int D = p.D;
    if (p.R == 1.0)
        return Eigen::MatrixXd::Identity(D, D) / std::sqrt(double(D));
    const double kp = p.kappa_plus * p.ell;
    const double a = p.s() * p.s() / (2.0 * kp * kp * (1.0 - p.R));
    Eigen::MatrixXd C(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            C(i, j) = std::exp(-a * (double(i) * i - 2.0 * p.R * i * j + double(j) * j));
    C /= C.norm();
    return C;
}

// weight table of the patch decomposition
inline Eigen::MatrixXd patch_weights(const Eigen::MatrixXd& C) {
    return C.cwiseProduct(C);
}

// subsystem von Neumann entropy from the Schmidt weights (squared singular
// values), in bits
inline double schmidt_entropy(const Eigen::MatrixXd& C) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    std::vector<double> lam;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        const double sv = svd.singularValues()(i);
        if (sv > kSchmidtCut) lam.push_back(sv * sv);
    }
    return entropy_discrete(lam);
}

inline Eigen::MatrixXd subsystem_density(const Eigen::MatrixXd& C) {
    Eigen::MatrixXd rho = C * C.transpose();
    return rho / rho.trace();
}

// mutual information of the position tomogram via the patch weight table;
// exact at the default geometry (patch overlap is below double precision)
inline MiResult tei_position_result(const TalbotParams& p) {
    const Eigen::MatrixXd W = patch_weights(coefficient_matrix(p));
    std::vector<double> flat(W.size());
    for (int i = 0; i < W.rows(); ++i)
        for (int j = 0; j < W.cols(); ++j) flat[i * W.cols() + j] = W(i, j);
    return mutual_information_table(flat, W.rows(), W.cols());
}

inline double tei_position(const TalbotParams& p) { return tei_position_result(p).mi; }

// ---------------------------------------------------------------- basis --

// image weights decay as exp(-(2 pi m sigma)^2 / (2 ell^2)); smallest m with
// u_m < 1e-12 (capped)
inline int basis_m_max(const TalbotParams& p) {
    const double c = 2.0 * std::numbers::pi * p.sigma_abs() / p.ell;
    for (int m = 1; m <= 64; ++m)
        if (std::exp(-0.5 * c * c * m * m) < 1e-12) return m;
    return 64;
}

inline double basis_image_weight(const TalbotParams& p, int m) {
    const double c = 2.0 * std::numbers::pi * double(m) * p.sigma_abs() / p.ell;
    return std::exp(-0.5 * c * c);
}

// normalization constant, truncation-consistent: uses the same |m| <= m_max
// set as evaluation, cross terms included
inline double basis_norm_const(const TalbotParams& p, int m_max) {
    const double delta = p.delta_abs();
    double I = 0.0;
    for (int m = -m_max; m <= m_max; ++m)
        for (int mp = -m_max; mp <= m_max; ++mp) {
            const double dmm = double(m - mp) * p.ell;
            I += basis_image_weight(p, m) * basis_image_weight(p, mp) *
                 std::exp(-dmm * dmm / (8.0 * delta * delta));
        }
    I *= std::sqrt(2.0 * std::numbers::pi) * delta;
    return 1.0 / std::sqrt(I);
}

inline double basis_value(const TalbotParams& p, int d, double x, int m_max, double norm) {
    const double delta = p.delta_abs();
    double v = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        const double dx = x - double(d) * p.s() - double(m) * p.ell;
        v += basis_image_weight(p, m) * std::exp(-dx * dx / (4.0 * delta * delta));
    }
    return norm * v;
}

// -------------------------------------------------------- grid tomogram --

struct GridSpec {
    double step_factor = 0.5;  // grid step, units of delta
    int m_max = 0;             // image copies retained in the basis
    double margin = 8.0;       // window margin beyond patch extent, units of delta

    void validate() const {
        if (!(step_factor > 0.0)) throw std::invalid_argument("grid step must be positive");
        if (m_max < 0 || m_max > 64) throw std::invalid_argument("m_max out of range");
        if (!(margin >= 0.0)) throw std::invalid_argument("margin must be nonnegative");
    }
};

// w(x_A, x_B) = (sum_{d1 d2} C_{d1 d2} T_{d1}(x_A) T_{d2}(x_B))^2 on a
// uniform square grid covering every retained patch plus margin
inline SquareGrid position_tomogram(const TalbotParams& p, const GridSpec& g, int threads = 1) {
    p.validate();
    g.validate();
    const Eigen::MatrixXd C = coefficient_matrix(p);
    const double delta = p.delta_abs();
    const double h = g.step_factor * delta;
    const double lo = -double(g.m_max) * p.ell - g.margin * delta;
    const double hi = double(p.D - 1) * p.s() + double(g.m_max) * p.ell + g.margin * delta;
    const std::size_t n = std::size_t(std::ceil((hi - lo) / h)) + 1;
    if (n > 20000) throw invariant_error("position_tomogram: grid too large");

    const double norm = basis_norm_const(p, g.m_max);
    Eigen::MatrixXd T(p.D, n);
    for (int d = 0; d < p.D; ++d)
        for (std::size_t i = 0; i < n; ++i)
            T(d, i) = basis_value(p, d, lo + h * double(i), g.m_max, norm);

    const Eigen::MatrixXd Psi = T.transpose() * (C * T);
    SquareGrid out{n, lo, h, std::vector<double>(n * n)};
    parallel_rows(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double v = Psi(i, j);
                out.w[i * n + j] = v * v;
            }
    });
    return out;
}

inline MiResult tei_position_grid(const TalbotParams& p, const GridSpec& g, int threads = 1) {
    const SquareGrid t = position_tomogram(p, g, threads);
    return mutual_information_grid(t.w, t.n, t.n, t.h, t.h);
}

// Marginal and joint entropies of the exact patch density (m_max = 0):
// each patch is a Gaussian of std delta, so the differential entropy is the
// table entropy plus log2(delta sqrt(2 pi e)) per axis.
inline double gaussian_entropy_bits(double std_dev) {
    return std::log2(std_dev * std::sqrt(2.0 * std::numbers::pi * std::numbers::e));
}

inline double analytic_marginal_entropy(const Eigen::MatrixXd& W, double delta, bool rows) {
    std::vector<double> m(rows ? W.rows() : W.cols());
    for (std::size_t k = 0; k < m.size(); ++k)
        m[k] = rows ? W.row(int(k)).sum() : W.col(int(k)).sum();
    return entropy_discrete(m) + gaussian_entropy_bits(delta);
}

inline double analytic_joint_entropy(const Eigen::MatrixXd& W, double delta) {
    std::vector<double> flat(W.size());
    for (int i = 0; i < W.rows(); ++i)
        for (int j = 0; j < W.cols(); ++j) flat[i * W.cols() + j] = W(i, j);
    return entropy_discrete(flat) + 2.0 * gaussian_entropy_bits(delta);
}

// Cross-route mutual information: marginal entropies from the analytic patch
// decomposition, joint entropy from the sampled grid. Agrees with
// tei_position at fine steps; an undersampled joint entropy drives it
// negative, which is what the selftest MI check exists to catch.
inline double cross_route_mi(const TalbotParams& p, const GridSpec& g, int threads = 1) {
    const Eigen::MatrixXd W = patch_weights(coefficient_matrix(p));
    const SquareGrid t = position_tomogram(p, g, threads);
    const MiResult grid = mutual_information_grid(t.w, t.n, t.n, t.h, t.h);
    const double delta = p.delta_abs();
    return analytic_marginal_entropy(W, delta, true) +
           analytic_marginal_entropy(W, delta, false) - grid.s_ab;
}

// ------------------------------------------------- discrete measurements --

// Joint outcome table of phase-shifted discrete Fourier measurements.
// amp(f, g) = (1/D) sum_{d1 d2} C_{d1 d2} e^{-2 pi i d1 (f+alpha)/D}
//                                e^{-2 pi i d2 (-g+beta)/D}
inline Eigen::MatrixXd joint_outcome_table(const Eigen::MatrixXd& C, double alpha,
                                           double beta) {
    const int D = int(C.rows());
    const std::complex<double> i2pi(0.0, -2.0 * std::numbers::pi);
    Eigen::MatrixXcd Va(D, D), Vb(D, D);
    for (int f = 0; f < D; ++f)
        for (int d = 0; d < D; ++d)
            Va(d, f) = std::exp(i2pi * (double(d) * (double(f) + alpha) / double(D))) /
                       std::sqrt(double(D));
    for (int g = 0; g < D; ++g)
        for (int d = 0; d < D; ++d)
            Vb(d, g) = std::exp(i2pi * (double(d) * (-double(g) + beta) / double(D))) /
                       std::sqrt(double(D));
    const Eigen::MatrixXcd A = Va.transpose() * C * Vb;
    return A.cwiseAbs2();
}

// mutual information of the unshifted conjugate-basis outcome table;
// equals log2 D at R = 1
inline double tei_discrete_basis(const Eigen::MatrixXd& C) {
    const Eigen::MatrixXd P = joint_outcome_table(C, 0.0, 0.0);
    std::vector<double> flat(P.size());
    for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j) flat[i * P.cols() + j] = P(i, j);
    return mutual_information_table(flat, P.rows(), P.cols()).mi;
}

namespace detail {
inline double pa_eq_b_plus(const Eigen::MatrixXd& P, int k) {
    const int D = int(P.rows());
    double t = 0.0;
    for (int p = 0; p < D; ++p) t += P((((p + k) % D) + D) % D, p);
    return t;
}
inline double pb_eq_a_plus(const Eigen::MatrixXd& P, int k) {
    const int D = int(P.rows());
    double t = 0.0;
    for (int p = 0; p < D; ++p) t += P(p, (((p + k) % D) + D) % D);
    return t;
}
}  // namespace detail

// Bell-type expression for two D-outcome measurements per side, measurement
// phases (0, 1/2) and (1/4, -1/4). Values above 2 witness entanglement;
// equals 2 sqrt(2) for the ideal pair at D = 2.
inline double cglmp_id(const Eigen::MatrixXd& C) {
    using detail::pa_eq_b_plus;
    using detail::pb_eq_a_plus;
    const int D = int(C.rows());
    const Eigen::MatrixXd P11 = joint_outcome_table(C, 0.0, 0.25);
    const Eigen::MatrixXd P12 = joint_outcome_table(C, 0.0, -0.25);
    const Eigen::MatrixXd P21 = joint_outcome_table(C, 0.5, 0.25);
    const Eigen::MatrixXd P22 = joint_outcome_table(C, 0.5, -0.25);
    double I = 0.0;
    for (int k = 0; k < D / 2; ++k) {
        const double Jk = pa_eq_b_plus(P11, k) - pa_eq_b_plus(P11, -k - 1) +
                          pb_eq_a_plus(P12, k) - pb_eq_a_plus(P12, -k - 1) +
                          pb_eq_a_plus(P21, k + 1) - pb_eq_a_plus(P21, -k) +
                          pa_eq_b_plus(P22, k) - pa_eq_b_plus(P22, -k - 1);
        I += (1.0 - 2.0 * double(k) / double(D - 1)) * Jk;
    }
    return I;
}

}  // namespace tomo
