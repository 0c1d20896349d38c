// params.hpp — physical parameter model, evolution matrix and the closed-form
// synchronization conditions for N bosonic modes coupled to one auxiliary mode.

#pragma once

#include "nhsync/common.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>

namespace nhsync {

// All rates and frequencies in natural units (hbar = kB = 1).
// The coupling between the auxiliary mode and each main mode is (g/sqrt(N)) e^{i theta};
// theta = 0 is the Hermitian limit, theta = +-pi/2 fully anti-Hermitian.
struct SystemParams {
    int n_modes = 1;          // N >= 1
    double omega0 = 0.0;      // auxiliary mode frequency
    double gamma0 = 0.0;      // auxiliary decay rate >= 0
    double omega = 0.0;       // main mode frequency
    double gamma = 0.0;       // main decay rate >= 0
    double coupling = 0.0;    // g >= 0
    double theta = 0.0;       // in (-pi, pi]
    double drive = 0.0;       // eta >= 0, acts on the auxiliary mode only
    double drive_freq = 0.0;  // Omega; convention: 0 whenever drive == 0

    // Collects every violated invariant instead of stopping at the first.
    std::vector<std::string> validation_errors() const {
        std::vector<std::string> errs;
        auto finite = [](double v) { return std::isfinite(v); };
        if (n_modes < 1) errs.push_back("n_modes must be >= 1");
        if (!finite(omega0) || !finite(omega) || !finite(theta) || !finite(drive_freq))
            errs.push_back("frequencies and theta must be finite");
        if (!finite(gamma0) || gamma0 < 0.0) errs.push_back("gamma0 must be >= 0");
        if (!finite(gamma) || gamma < 0.0) errs.push_back("gamma must be >= 0");
        if (!finite(coupling) || coupling < 0.0) errs.push_back("coupling must be >= 0");
        if (!(theta > -pi && theta <= pi)) errs.push_back("theta must lie in (-pi, pi]");
        if (!finite(drive) || drive < 0.0) errs.push_back("drive must be >= 0");
        if (drive == 0.0 && drive_freq != 0.0)
            errs.push_back("drive_freq must be 0 when drive = 0 (undriven frame convention)");
        return errs;
    }

    void validate() const {
        const auto errs = validation_errors();
        if (errs.empty()) return;
        std::ostringstream os;
        os << "invalid SystemParams:";
        for (const auto& e : errs) os << "\n  - " << e;
        throw std::invalid_argument(os.str());
    }
};

// Quantities derived from the bare parameters; mu is the principal branch of
// sqrt((dw - i dg)^2/4 + g^2 e^{2 i theta}) and s_plus * s_minus = -1 away from
// the exceptional point.
struct DerivedParams {
    double delta0 = 0.0;  // omega0 - Omega
    double delta = 0.0;   // omega - Omega
    double dw = 0.0;      // omega0 - omega
    double dg = 0.0;      // gamma0 - gamma
    cxd mu{0.0, 0.0};
    cxd s_plus{0.0, 0.0};
    cxd s_minus{0.0, 0.0};
    bool at_ep = false;   // |mu| below the EP threshold; branch formulas are unreliable
};

inline double ep_threshold(const SystemParams& p) {
    const double dw = p.omega0 - p.omega;
    const double dg = p.gamma0 - p.gamma;
    return 1e-10 * std::max({std::abs(dw), std::abs(dg), p.coupling, 1.0});
}

namespace detail {

// Shear coefficient s_b = g e^{i theta} / ((dw - i dg)/2 + b mu), evaluated through
// whichever of its two closed forms has the better-conditioned denominator.
inline cxd shear_coefficient(double g, double theta, cxd half_m, cxd mu, int b) {
    const cxd ge = g * std::exp(iu * theta);
    const cxd denom = half_m + static_cast<double>(b) * mu;
    if (std::abs(denom) >= g) {
        if (denom == cxd{0.0, 0.0}) return cxd{0.0, 0.0};  // g = 0 and degenerate branch
        return ge / denom;
    }
    return -(half_m - static_cast<double>(b) * mu) / ge;
}

}  // namespace detail

inline DerivedParams derived_params(const SystemParams& p) {
    p.validate();
    DerivedParams d;
    d.delta0 = p.omega0 - p.drive_freq;
    d.delta = p.omega - p.drive_freq;
    d.dw = p.omega0 - p.omega;
    d.dg = p.gamma0 - p.gamma;
    const cxd half_m = 0.5 * cxd{d.dw, -d.dg};
    d.mu = std::sqrt(half_m * half_m + p.coupling * p.coupling * std::exp(2.0 * iu * p.theta));
    d.at_ep = std::abs(d.mu) < ep_threshold(p);
    d.s_plus = detail::shear_coefficient(p.coupling, p.theta, half_m, d.mu, +1);
    d.s_minus = detail::shear_coefficient(p.coupling, p.theta, half_m, d.mu, -1);
    return d;
}

inline cxd shear(const DerivedParams& d, int branch) {
    return branch > 0 ? d.s_plus : d.s_minus;
}

// Evolution matrix H of dA/dt = -i H A + eta u, u = (1, 0, ..., 0)^T, in the frame
// rotating at the drive frequency.
struct EvolutionMatrix {
    int dim = 0;  // N + 1
    CMatrix entries;
};

inline EvolutionMatrix build_evolution_matrix(const SystemParams& p) {
    p.validate();
    const int n = p.n_modes;
    const double delta0 = p.omega0 - p.drive_freq;
    const double delta = p.omega - p.drive_freq;
    EvolutionMatrix h;
    h.dim = n + 1;
    h.entries = CMatrix::Zero(n + 1, n + 1);
    h.entries(0, 0) = cxd{delta0, -p.gamma0};
    const cxd off = p.coupling / std::sqrt(static_cast<double>(n)) * std::exp(iu * p.theta);
    for (int j = 1; j <= n; ++j) {
        h.entries(j, j) = cxd{delta, -p.gamma};
        h.entries(0, j) = off;
        h.entries(j, 0) = off;
    }
    return h;
}

// --------------------------- synchronization conditions ---------------------------

enum class Verdict { synchronizes, anti_synchronizes, fails };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::synchronizes: return "synchronizes";
        case Verdict::anti_synchronizes: return "anti_synchronizes";
        default: return "fails";
    }
}

struct ConditionReport {
    double residual_imag = 0.0;  // division-free tangent-condition residual
    bool inequality_ok = false;  // strict sign condition
    Verdict verdict = Verdict::fails;
    std::string branch_note;
};

inline constexpr double default_condition_tol = 1e-9;

namespace detail {

inline ConditionReport condition_report(double a, double b, double theta, double tol,
                                        bool flip_inequality) {
    // Tangent condition tan(theta) = -b/a in the division-free form
    // a sin(theta) + b cos(theta) = 0.  The strict sign condition is
    // b sin(theta) < a cos(theta) for the undriven case and the reversed
    // orientation a cos(theta) < b sin(theta) for the driven one.
    ConditionReport r;
    r.residual_imag = a * std::sin(theta) + b * std::cos(theta);
    r.inequality_ok = flip_inequality ? a * std::cos(theta) < b * std::sin(theta)
                                      : b * std::sin(theta) < a * std::cos(theta);
    const bool residual_ok = std::abs(r.residual_imag) <= tol;
    if (residual_ok && r.inequality_ok) {
        r.verdict = Verdict::synchronizes;
        r.branch_note = "long-time amplitude ratio real and positive";
    } else if (residual_ok) {
        r.verdict = Verdict::anti_synchronizes;
        r.branch_note = "residual vanishes but the sign condition is reversed (phase shift pi)";
    } else {
        r.verdict = Verdict::fails;
        r.branch_note = "tangent condition violated";
    }
    return r;
}

}  // namespace detail

// Undriven condition: tan(theta) = -dg/dw plus dg sin(theta) < dw cos(theta).
inline ConditionReport sync_condition_undriven(const SystemParams& p,
                                               double tol = default_condition_tol) {
    p.validate();
    if (p.drive != 0.0)
        throw std::invalid_argument("sync_condition_undriven: drive must be 0");
    const double dw = p.omega0 - p.omega;
    const double dg = p.gamma0 - p.gamma;
    return detail::condition_report(dw, dg, p.theta, tol, /*flip_inequality=*/false);
}

// Driven condition: tan(theta) = -gamma/(omega - Omega) plus
// (omega - Omega) cos(theta) < gamma sin(theta).
inline ConditionReport sync_condition_driven(const SystemParams& p,
                                             double tol = default_condition_tol) {
    p.validate();
    if (p.drive <= 0.0)
        throw std::invalid_argument("sync_condition_driven: drive must be > 0");
    const double detuning = p.omega - p.drive_freq;
    return detail::condition_report(detuning, p.gamma, p.theta, tol, /*flip_inequality=*/true);
}

enum class ConditionMode { undriven, driven };

// Inverts the synchronization condition for theta, returning the branch of the
// arctangent that also satisfies the strict inequality.
inline double solve_sync_angle(const SystemParams& p, ConditionMode mode) {
    p.validate();
    double a = 0.0, b = 0.0;
    const bool driven = mode == ConditionMode::driven;
    if (driven) {
        a = p.omega - p.drive_freq;
        b = p.gamma;
    } else {
        a = p.omega0 - p.omega;
        b = p.gamma0 - p.gamma;
    }
    if (a == 0.0 && b == 0.0)
        throw std::domain_error("solve_sync_angle: condition vacuous (degenerate input)");
    // Candidates with a sin + b cos = 0: theta0 and theta0 + pi.
    const double theta0 = std::atan2(-b, a);
    for (double cand : {theta0, wrap_angle(theta0 + pi)}) {
        const bool ok = driven ? a * std::cos(cand) < b * std::sin(cand)
                               : b * std::sin(cand) < a * std::cos(cand);
        if (ok) return cand;
    }
    throw std::domain_error("solve_sync_angle: no branch satisfies the strict inequality");
}

}  // namespace nhsync
