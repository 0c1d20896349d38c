// propagator.hpp — exact time evolution of the linear mode equations: closed-form
// spectrum, eigendecomposition propagator, EP-safe dense fallback, driven steady
// state and the long-time amplitude ratios behind the synchronization conditions.

#pragma once

#include "nhsync/params.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <vector>

namespace nhsync {

// Closed-form eigenvalues of the evolution matrix: the two bright-sector values
// (delta + delta0)/2 - i (gamma + gamma0)/2 +- mu and the (N-1)-fold dark value
// delta - i gamma.
struct Spectrum {
    cxd lambda_plus;
    cxd lambda_minus;
    cxd lambda_dark;
    int dark_multiplicity = 0;  // N - 1
    bool ep_flag = false;
};

inline Spectrum spectrum(const SystemParams& p) {
    const auto d = derived_params(p);
    Spectrum s;
    const cxd mid{0.5 * (d.delta + d.delta0), -0.5 * (p.gamma + p.gamma0)};
    s.lambda_plus = mid + d.mu;
    s.lambda_minus = mid - d.mu;
    s.lambda_dark = cxd{d.delta, -p.gamma};
    s.dark_multiplicity = p.n_modes - 1;
    s.ep_flag = d.at_ep;
    return s;
}

inline double slowest_decay_rate(const Spectrum& s) {
    double im = std::max(s.lambda_plus.imag(), s.lambda_minus.imag());
    if (s.dark_multiplicity > 0) im = std::max(im, s.lambda_dark.imag());
    return -im;
}

inline bool is_damped(const Spectrum& s) {
    return slowest_decay_rate(s) > 0.0;
}

enum class Frame { rotating, lab };

struct Trajectory {
    RVector times;
    std::vector<CVector> states;
    Frame frame = Frame::rotating;
};

namespace detail {

inline void check_times(const RVector& times) {
    if (times.size() < 1) throw std::invalid_argument("time grid must be nonempty");
    if (times[0] < 0.0) throw std::invalid_argument("time grid must start at t >= 0");
    for (Eigen::Index k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

// Driven integral factor (1 - e^{-i lam t}) / (i lam), with a series expansion
// around |lam t| -> 0 to avoid cancellation.
inline cxd driven_factor(cxd lam, double t) {
    const cxd x = iu * lam * t;
    if (std::abs(x) < 1e-6) return t * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0);
    return (1.0 - std::exp(-x)) / (iu * lam);
}

// Fourier block acting on the main-mode subspace: F_{jk} = e^{2 pi i jk/N}/sqrt(N),
// j,k = 1..N.  Applied through a roots-of-unity table, no matrix is stored.
struct FourierBlock {
    int n;
    std::vector<cxd> roots;  // roots[m] = e^{2 pi i m / N}

    explicit FourierBlock(int n_modes) : n(n_modes), roots(n_modes) {
        for (int m = 0; m < n_modes; ++m)
            roots[m] = std::exp(iu * (2.0 * pi * m / n_modes));
    }

    void forward(const CVector& in, CVector& out) const {
        apply(in, out, false);
    }
    void inverse(const CVector& in, CVector& out) const {
        apply(in, out, true);
    }

  private:
    void apply(const CVector& in, CVector& out, bool conjugate) const {
        const double norm = 1.0 / std::sqrt(static_cast<double>(n));
        out(0) = in(0);
        for (long j = 1; j <= n; ++j) {
            cxd acc{0.0, 0.0};
            for (long k = 1; k <= n; ++k) {
                cxd w = roots[static_cast<std::size_t>((j * k) % n)];
                acc += (conjugate ? std::conj(w) : w) * in(k);
            }
            out(j) = norm * acc;
        }
    }
};

}  // namespace detail

inline Trajectory propagate_dense(const EvolutionMatrix& h, const CVector& a0, double drive,
                                  const RVector& times) {
    detail::check_times(times);
    if (a0.size() != h.dim)
        throw std::invalid_argument("propagate_dense: state dimension mismatch");
    const int dim = h.dim;

    // Affine system absorbed into one extra constant state, so a single matrix
    // exponential covers the homogeneous and the driven part uniformly.
    CMatrix laug = CMatrix::Zero(dim + 1, dim + 1);
    laug.topLeftCorner(dim, dim) = -iu * h.entries;
    laug(0, dim) = drive;

    CVector state(dim + 1);
    state.head(dim) = a0;
    state(dim) = 1.0;

    Trajectory traj;
    traj.times = times;
    traj.states.reserve(static_cast<std::size_t>(times.size()));

    double prev_t = 0.0;
    double cached_dt = std::numeric_limits<double>::quiet_NaN();
    CMatrix estep;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double dt = times[k] - prev_t;
        if (dt > 0.0) {
            if (dt != cached_dt) {
                estep = (laug * dt).exp();
                cached_dt = dt;
            }
            state = estep * state;
        }
        prev_t = times[k];
        if (!state.allFinite())
            throw NumericError("propagate_dense: non-finite state at sample " +
                               std::to_string(k));
        traj.states.push_back(state.head(dim));
    }
    return traj;
}

// Homogeneous part via (S T)^{-1} e^{-i D t} (S T), driven part in closed form per
// eigenvalue.  Routed to the dense propagator at (or numerically near) the EP.
inline Trajectory evolve_linear(const SystemParams& p, const CVector& a0, const RVector& times) {
    p.validate();
    detail::check_times(times);
    const int n = p.n_modes;
    if (a0.size() != n + 1)
        throw std::invalid_argument("evolve_linear: state dimension mismatch");

    const auto d = derived_params(p);
    // Either branch generates the same propagator; |s| <= 1 keeps the shear inverse
    // well conditioned.  1 + s^2 -> 0 only at the EP.
    const int b = std::abs(d.s_plus) <= std::abs(d.s_minus) ? +1 : -1;
    const cxd s = shear(d, b);
    const cxd one_plus_s2 = 1.0 + s * s;
    if (d.at_ep || !std::isfinite(std::abs(s)) || std::abs(one_plus_s2) < 1e-6)
        return propagate_dense(build_evolution_matrix(p), a0, p.drive, times);

    const cxd mid{0.5 * (d.delta + d.delta0), -0.5 * (p.gamma + p.gamma0)};
    const cxd lam_iso = mid + static_cast<double>(b) * d.mu;   // position 0 of D
    const cxd lam_far = mid - static_cast<double>(b) * d.mu;   // position N of D
    const cxd lam_dark{d.delta, -p.gamma};

    detail::FourierBlock fourier(n);

    // y = S T a0; the shear touches only entries 0 and N.
    CVector y(n + 1);
    fourier.forward(a0, y);
    const cxd y0 = y(0) + s * y(n);
    const cxd yn = -s * y(0) + y(n);
    y(0) = y0;
    y(n) = yn;

    Trajectory traj;
    traj.times = times;
    traj.states.reserve(static_cast<std::size_t>(times.size()));

    CVector z(n + 1), out(n + 1);
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double t = times[k];
        if (t == 0.0) {
            traj.states.push_back(a0);
            continue;
        }
        const cxd edark = std::exp(-iu * lam_dark * t);
        z = y * edark;
        z(0) = y(0) * std::exp(-iu * lam_iso * t);
        z(n) = y(n) * std::exp(-iu * lam_far * t);
        if (p.drive > 0.0) {
            // S T u = (1, 0, ..., 0, -s)^T
            z(0) += p.drive * detail::driven_factor(lam_iso, t);
            z(n) += p.drive * detail::driven_factor(lam_far, t) * (-s);
        }
        const cxd z0 = (z(0) - s * z(n)) / one_plus_s2;
        const cxd zn = (s * z(0) + z(n)) / one_plus_s2;
        z(0) = z0;
        z(n) = zn;
        fourier.inverse(z, out);
        if (!out.allFinite())
            throw NumericError("evolve_linear: non-finite state at sample " + std::to_string(k));
        traj.states.push_back(out);
    }
    return traj;
}

// Driven steady state from -i H A + eta u = 0.
inline CVector steady_state(const SystemParams& p) {
    p.validate();
    if (p.drive <= 0.0) throw std::invalid_argument("steady_state: drive must be > 0");
    const auto spec = spectrum(p);
    if (!is_damped(spec))
        throw std::domain_error("steady_state: system is not damped (undamped or amplifying mode)");
    const auto h = build_evolution_matrix(p);
    CVector rhs = CVector::Zero(h.dim);
    rhs(0) = -iu * p.drive;
    CVector a = h.entries.partialPivLu().solve(rhs);
    const double resid = ((-iu) * (h.entries * a) + p.drive * CVector::Unit(h.dim, 0)).norm();
    if (!(resid <= 1e-10 * p.drive))
        throw NumericError("steady_state: singular linear solve, residual " + std::to_string(resid));
    return a;
}

// Long-time amplitude ratio alpha_j / alpha_0 (j >= 1).  Undriven: -1/(sqrt(N) s_b)
// with s_b the branch whose isolated eigenvalue decays fastest; driven:
// -(g e^{i theta}) / (sqrt(N) (delta - i gamma)).
inline cxd long_time_ratio(const SystemParams& p) {
    p.validate();
    const auto d = derived_params(p);
    if (d.at_ep) throw std::domain_error("long_time_ratio: at exceptional point");
    const double root_n = std::sqrt(static_cast<double>(p.n_modes));
    if (p.drive > 0.0) {
        const cxd dd{d.delta, -p.gamma};
        if (std::abs(dd) == 0.0)
            throw std::domain_error("long_time_ratio: delta - i gamma vanishes");
        return -(p.coupling * std::exp(iu * p.theta)) / (root_n * dd);
    }
    const auto spec = spectrum(p);
    const double im_p = spec.lambda_plus.imag();
    const double im_m = spec.lambda_minus.imag();
    const double tol = 1e-9 * std::max({1.0, std::abs(im_p), std::abs(im_m)});
    if (std::abs(im_p - im_m) <= tol)
        throw std::domain_error("long_time_ratio: no dominant mode (degenerate decay rates)");
    // Survivor carries -b mu, so the transform branch isolating the fast mode is
    // b = +1 when Im mu < 0.
    const int b = d.mu.imag() < 0.0 ? +1 : -1;
    const double im_survivor = std::max(im_p, im_m);
    if (spec.dark_multiplicity > 0 && im_survivor <= spec.lambda_dark.imag() + tol)
        throw std::domain_error(
            "long_time_ratio: dark-dominated regime (ratio depends on initial conditions)");
    return -1.0 / (root_n * shear(d, b));
}

inline Trajectory to_lab_frame(const Trajectory& traj, double drive_freq) {
    if (traj.frame == Frame::lab) return traj;
    Trajectory lab;
    lab.times = traj.times;
    lab.frame = Frame::lab;
    lab.states.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        lab.states.push_back(traj.states[k] * std::exp(-iu * drive_freq * traj.times[static_cast<Eigen::Index>(k)]));
    return lab;
}

}  // namespace nhsync
