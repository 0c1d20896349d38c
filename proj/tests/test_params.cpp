#include <catch2/catch_amalgamated.hpp>

#include "nhsync/params.hpp"

#include <random>

using namespace nhsync;
using Catch::Approx;

namespace {

SystemParams base_params() {
    SystemParams p;
    p.n_modes = 2;
    p.omega0 = 1.0;
    p.gamma0 = 0.1;
    p.omega = 1.0;
    p.gamma = 0.1;
    p.coupling = 0.5;
    p.theta = pi / 2;
    return p;
}

}  // namespace

TEST_CASE("evolution matrix: decoupled diagonal case") {
    SystemParams p;
    p.n_modes = 1;
    p.omega0 = 2.0;
    p.gamma0 = 0.1;
    p.omega = 1.0;
    p.gamma = 0.05;
    p.coupling = 0.0;
    const auto h = build_evolution_matrix(p);
    REQUIRE(h.dim == 2);
    CHECK(h.entries(0, 0) == cxd(2.0, -0.1));
    CHECK(h.entries(1, 1) == cxd(1.0, -0.05));
    CHECK(h.entries(0, 1) == cxd(0.0, 0.0));
    CHECK(h.entries(1, 0) == cxd(0.0, 0.0));
}

TEST_CASE("evolution matrix: N=2 anti-Hermitian star") {
    SystemParams p;
    p.n_modes = 2;
    p.coupling = 1.0;
    p.theta = pi / 2;
    const auto h = build_evolution_matrix(p);
    const cxd expect = iu / std::sqrt(2.0);
    for (int j = 1; j <= 2; ++j) {
        CHECK(std::abs(h.entries(0, j) - expect) < 1e-15);
        CHECK(std::abs(h.entries(j, 0) - expect) < 1e-15);
        CHECK(h.entries(j, j) == cxd(0.0, 0.0));
    }
    CHECK(h.entries(0, 0) == cxd(0.0, 0.0));
    CHECK(h.entries(1, 2) == cxd(0.0, 0.0));
}

TEST_CASE("evolution matrix: off-diagonal magnitude at N=100") {
    SystemParams p = base_params();
    p.n_modes = 100;
    p.coupling = 0.5;
    p.theta = pi / 2;
    const auto h = build_evolution_matrix(p);
    // (g/sqrt(N)) e^{i pi/2} = 0.05 i
    CHECK(std::abs(h.entries(0, 37) - cxd(0.0, 0.05)) < 1e-16);
}

TEST_CASE("evolution matrix: complex-symmetric always, Hermitian only without loss at theta 0/pi") {
    std::mt19937_64 eng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        SystemParams p;
        p.n_modes = 1 + static_cast<int>(eng() % 5);
        p.omega0 = u(eng);
        p.omega = u(eng);
        p.gamma0 = 0.5 * (u(eng) + 1.0);
        p.gamma = 0.5 * (u(eng) + 1.0);
        p.coupling = 0.5 * (u(eng) + 1.0);
        p.theta = u(eng) * pi * 0.999;
        const auto h = build_evolution_matrix(p);
        CHECK((h.entries - h.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
        const bool herm = (h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-15;
        const bool expect_herm =
            (std::abs(p.theta) < 1e-15 || std::abs(std::abs(p.theta) - pi) < 1e-15) &&
            p.gamma == 0.0 && p.gamma0 == 0.0;
        CHECK(herm == expect_herm);
    }
    SystemParams p = base_params();
    p.gamma = p.gamma0 = 0.0;
    p.theta = 0.0;
    const auto h = build_evolution_matrix(p);
    CHECK((h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("derived params: trivial branch values") {
    SystemParams p = base_params();
    p.coupling = 1.0;
    p.theta = 0.0;
    auto d = derived_params(p);
    CHECK(d.mu.real() == Approx(1.0));
    CHECK(d.mu.imag() == Approx(0.0).margin(1e-15));
    CHECK(std::abs(d.s_plus - cxd(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(d.s_minus - cxd(-1.0, 0.0)) < 1e-14);

    p.theta = pi / 2;  // principal branch of sqrt(e^{i pi}) = i
    d = derived_params(p);
    CHECK(std::abs(d.mu - iu) < 1e-14);
    CHECK_FALSE(d.at_ep);
}

TEST_CASE("derived params: EP locus from the |mu| scan oracle") {
    // Numerical scan of |mu| over (dw, dg, theta) pins the zero set at
    // (dw, dg) = -+ 2 g (sin theta, cos theta): the EP sits at dg = -2g for theta = 0
    // and at dw = -+2g for theta = pi/2, while (dw = 0, dg = -2g, theta = pi/2) has
    // mu = i g sqrt(2) and is regular.
    SystemParams p = base_params();  // dg = -2g at theta = 0: exact EP
    p.coupling = 1.0;
    p.gamma0 = 0.0;
    p.gamma = 2.0;
    p.theta = 0.0;
    auto d = derived_params(p);
    CHECK(d.at_ep);
    CHECK(std::abs(d.mu) == 0.0);

    p.gamma0 = 2.0;  // dg = +2g, the mirrored branch of the locus
    p.gamma = 0.0;
    d = derived_params(p);
    CHECK(d.at_ep);

    // theta = pi/2 leg of the locus: exp(2 i theta) carries the rounding of pi, so
    // |mu| lands near 1e-8 rather than below the 1e-10 relative threshold.
    p = base_params();
    p.coupling = 1.0;
    p.omega0 = p.omega + 2.0;  // dw = 2g
    p.theta = pi / 2;
    d = derived_params(p);
    CHECK(std::abs(d.mu) < 1e-7);

    p = base_params();  // dw = 0, dg = -2g: not an EP at theta = pi/2
    p.coupling = 1.0;
    p.gamma0 = p.gamma;
    p.gamma = p.gamma0 + 2.0;
    p.theta = pi / 2;
    d = derived_params(p);
    CHECK_FALSE(d.at_ep);
    CHECK(std::abs(d.mu - iu * std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("derived params: s+ s- = -1 and both closed forms agree, 1000 draws") {
    std::mt19937_64 eng(1234);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    while (checked < 1000) {
        SystemParams p;
        p.n_modes = 3;
        p.omega0 = u(eng);
        p.omega = u(eng);
        p.gamma0 = 0.3 * (u(eng) + 1.0);
        p.gamma = 0.3 * (u(eng) + 1.0);
        p.coupling = 0.05 + 0.5 * (u(eng) + 1.0);
        p.theta = u(eng) * pi * 0.999;
        const auto d = derived_params(p);
        if (d.at_ep) continue;
        ++checked;
        CHECK(std::abs(d.s_plus * d.s_minus + 1.0) < 1e-12);
        const cxd half_m = 0.5 * cxd{d.dw, -d.dg};
        const cxd ge = p.coupling * std::exp(iu * p.theta);
        for (int b : {+1, -1}) {
            const cxd form1 = ge / (half_m + static_cast<double>(b) * d.mu);
            const cxd form2 = -(half_m - static_cast<double>(b) * d.mu) / ge;
            CHECK(std::abs(form1 - form2) < 1e-12 * std::max(1.0, std::abs(form1)));
            CHECK(std::abs(form1 - shear(d, b)) < 1e-12 * std::max(1.0, std::abs(form1)));
        }
    }
}

TEST_CASE("undriven condition: paper cases") {
    SystemParams p = base_params();
    p.gamma0 = 0.05;
    p.gamma = 0.1;  // dg < 0, dw = 0
    p.theta = pi / 2;
    auto r = sync_condition_undriven(p);
    CHECK(r.verdict == Verdict::synchronizes);
    CHECK(std::abs(r.residual_imag) < 1e-15);

    p.theta = -pi / 2;
    r = sync_condition_undriven(p);
    CHECK(r.verdict == Verdict::anti_synchronizes);

    // Hermitian case: condition formally satisfied (tau_sync divergence is a
    // dynamics-level caveat, not a condition-level one).
    p = base_params();
    p.omega0 = 1.5;  // dw > 0, dg = 0
    p.theta = 0.0;
    r = sync_condition_undriven(p);
    CHECK(r.verdict == Verdict::synchronizes);
    CHECK(r.residual_imag == 0.0);

    p.drive = 0.1;
    CHECK_THROWS_AS(sync_condition_undriven(p), std::invalid_argument);
}

TEST_CASE("driven condition: sign cases") {
    SystemParams p = base_params();
    p.drive = 1.0;
    p.drive_freq = 1.0;  // omega = Omega
    p.theta = pi / 2;
    auto r = sync_condition_driven(p);
    CHECK(r.verdict == Verdict::synchronizes);

    // omega - Omega = gamma > 0 at theta = -pi/4: residual zero, inequality reversed
    p.omega = 1.1;
    p.drive_freq = 1.0;
    p.gamma = 0.1;
    p.theta = -pi / 4;
    r = sync_condition_driven(p);
    CHECK(std::abs(r.residual_imag) < 1e-15);
    CHECK(r.verdict == Verdict::anti_synchronizes);

    // omega - Omega = 1, gamma = 1, theta = 3pi/4: synchronizes
    p.omega = 2.0;
    p.drive_freq = 1.0;
    p.gamma = 1.0;
    p.theta = 3 * pi / 4;
    r = sync_condition_driven(p);
    CHECK(std::abs(r.residual_imag) < 1e-14);
    CHECK(r.verdict == Verdict::synchronizes);

    p.drive = 0.0;
    p.drive_freq = 0.0;
    CHECK_THROWS_AS(sync_condition_driven(p), std::invalid_argument);
}

TEST_CASE("solve_sync_angle: branch selection and degeneracy") {
    SystemParams p = base_params();
    p.gamma0 = 0.0;
    p.gamma = 0.1;  // dg = -0.1, dw = 0
    CHECK(solve_sync_angle(p, ConditionMode::undriven) == Approx(pi / 2));

    SystemParams q = base_params();
    q.drive = 0.5;
    q.drive_freq = q.omega;
    q.gamma = 0.05;
    CHECK(solve_sync_angle(q, ConditionMode::driven) == Approx(pi / 2));

    SystemParams w = base_params();
    w.omega0 = 2.0;  // dw = 1, dg = 0 -> theta = 0, not pi
    CHECK(solve_sync_angle(w, ConditionMode::undriven) == Approx(0.0).margin(1e-15));

    SystemParams d = base_params();  // dw = dg = 0
    CHECK_THROWS_AS(solve_sync_angle(d, ConditionMode::undriven), std::domain_error);
}

TEST_CASE("solve_sync_angle output always passes the condition, random draws") {
    std::mt19937_64 eng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        SystemParams p = base_params();
        p.omega0 = u(eng);
        p.omega = u(eng);
        p.gamma0 = 0.4 * (u(eng) + 1.0);
        p.gamma = 0.4 * (u(eng) + 1.0);
        if (p.omega0 == p.omega && p.gamma0 == p.gamma) continue;
        p.theta = solve_sync_angle(p, ConditionMode::undriven);
        CHECK(sync_condition_undriven(p).verdict == Verdict::synchronizes);

        SystemParams q = p;
        q.drive = 0.3;
        q.drive_freq = u(eng);
        q.gamma = 0.05 + 0.4 * (u(eng) + 1.0);
        if (q.omega == q.drive_freq && q.gamma == 0.0) continue;
        q.theta = solve_sync_angle(q, ConditionMode::driven);
        CHECK(sync_condition_driven(q).verdict == Verdict::synchronizes);
    }
}

TEST_CASE("validation collects all errors") {
    SystemParams p;
    p.n_modes = 0;
    p.gamma = -1.0;
    p.theta = 4.0;
    const auto errs = p.validation_errors();
    CHECK(errs.size() == 3);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
