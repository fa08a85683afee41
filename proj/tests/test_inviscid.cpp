#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agg/diagnostics.hpp"
#include "agg/dyadic.hpp"
#include "agg/error.hpp"
#include "agg/initial.hpp"
#include "agg/interpolate.hpp"
#include "agg/inviscid.hpp"
#include "agg/oracles.hpp"
#include "agg/smooth.hpp"
#include "support.hpp"

using namespace agg;

namespace {

SimParams inviscid_params(double t_end, double dt, double s1 = -1.0, double s2 = 1.0) {
    SimParams p;
    p.sigma1 = s1;
    p.sigma2 = s2;
    p.nu = 0.0;
    p.t_end = t_end;
    p.dt = dt;
    return p;
}

// periodic field rotating rigidly with angular speed omega for r < 2, zero beyond r = 4
VectorField swirl(const Grid& g, double omega) {
    const Eigen::MatrixXd x = g.node_coordinates();
    const double c = g.box_length() / 2;
    VectorField v(g);
    for (Eigen::Index p = 0; p < g.size(); ++p) {
        const double dx = x(0, p) - c, dy = x(1, p) - c;
        const double w = omega * plateau(std::hypot(dx, dy) / 2.0);
        v.components(p, 0) = -w * dy;
        v.components(p, 1) = w * dx;
    }
    return v;
}

// unbounded rigid rotation sampled on the grid; only valid away from the seam
VectorField rigid(const Grid& g, double omega) {
    const Eigen::MatrixXd x = g.node_coordinates();
    const double c = g.box_length() / 2;
    VectorField v(g);
    for (Eigen::Index p = 0; p < g.size(); ++p) {
        v.components(p, 0) = -omega * (x(1, p) - c);
        v.components(p, 1) = omega * (x(0, p) - c);
    }
    return v;
}

ScalarField constant(const Grid& g, double c) {
    ScalarField f(g);
    f.values.setConstant(c);
    return f;
}

double l2(const Eigen::ArrayXd& a, const Grid& g) { return std::sqrt(a.square().sum() * g.cell_volume()); }

}  // namespace

TEST_CASE("trace_back: zero and constant fields") {
    const Grid g(2, 32, 4.0);
    const VectorField zero(g);
    const FlowMapSample s = trace_back(zero, zero, 0.1);
    CHECK((s.departure.array() - g.node_coordinates().array()).abs().maxCoeff() == 0.0);
    CHECK(s.order == 4);
    CHECK(s.dt == 0.1);

    VectorField c(g);
    c.components.col(0).setConstant(0.3);
    c.components.col(1).setConstant(-0.7);
    const FlowMapSample sc = trace_back(c, c, 0.1);
    const Eigen::MatrixXd x = g.node_coordinates();
    double worst = 0.0;
    for (Eigen::Index p = 0; p < g.size(); ++p) {
        for (int a = 0; a < 2; ++a) {
            const double expect = std::fmod(x(a, p) - c.components(p, a) * 0.1 + 4.0, 4.0);
            double d = std::abs(sc.departure(a, p) - expect);
            d = std::min(d, 4.0 - d);
            worst = std::max(worst, d);
        }
        CHECK(sc.departure(0, p) >= 0.0);
        CHECK(sc.departure(1, p) < 4.0);
    }
    CHECK(worst <= 1e-14);
    CHECK_THROWS_AS(trace_back(c, c, 1.0), StepTooLarge);
}

TEST_CASE("trace_back: rigid rotation to fifth order per step") {
    const Grid g(2, 64, 8.0);
    const VectorField v = rigid(g, 1.0);
    const Eigen::MatrixXd x = g.node_coordinates();
    std::vector<double> errs;
    for (double dt : {0.4, 0.2}) {
        const FlowMapSample s = trace_back(v, v, dt, 100.0);
        double worst = 0.0;
        for (Eigen::Index p = 0; p < g.size(); ++p) {
            const double dx = x(0, p) - 4.0, dy = x(1, p) - 4.0;
            if (std::hypot(dx, dy) > 1.5) continue;
            const double ex = 4.0 + std::cos(-dt) * dx - std::sin(-dt) * dy;
            const double ey = 4.0 + std::sin(-dt) * dx + std::cos(-dt) * dy;
            worst = std::max(worst, std::hypot(s.departure(0, p) - ex, s.departure(1, p) - ey));
        }
        errs.push_back(worst);
    }
    MESSAGE("rotation errors " << errs[0] << " " << errs[1]);
    CHECK(errs[0] / errs[1] >= 24.0);
}

TEST_CASE("uniform density: exact reaction update") {
    const Grid g(2, 32, 4.0);
    for (double c : {0.5, 2.0}) {
        const ScalarField r = step_inviscid(constant(g, c), inviscid_params(0.02, 0.02), 0.02);
        const double exact = c / (1.0 - 0.02 * c);
        CHECK(test::max_abs(r.values - exact) <= 1e-14 * exact);
    }
    CHECK_THROWS_AS(step_inviscid(constant(g, 2.0), inviscid_params(0.1, 0.1), 0.4), StepTooLarge);
}

TEST_CASE("passive transport returns after a full rotation") {
    const Grid g(2, 128, 8.0);
    const VectorField v = swirl(g, 1.0);
    // the bump stays inside the rigid disc; error is dominated by one cubic interpolation per step
    const ScalarField rho0 = sample_radial(g, gaussian_profile(1.0, 0.4, 1.6), {4.4, 4.0, 0.0});
    ScalarField rho = rho0;
    const int steps = 20;
    const double dt = 2 * std::numbers::pi / steps;
    for (int s = 0; s < steps; ++s) {
        const FlowMapSample fm = trace_back(v, v, dt, 16.0);
        rho.values = interpolate(rho, fm.departure);
    }
    const double err = l2(rho.values - rho0.values, g);
    MESSAGE("rotation return L2 error " << err);
    CHECK(err <= 1e-3);
}

TEST_CASE("two half steps agree with one step to third order") {
    const Grid g(2, 256, 8.0);
    const ScalarField rho0 = two_bumps(g, 1.0, 0.5, 2.0);
    std::vector<double> d;
    for (double dt : {0.05, 0.025}) {
        InviscidStepper one(rho0, inviscid_params(1.0, dt));
        one.step(dt);
        InviscidStepper two(rho0, inviscid_params(1.0, dt));
        two.step(dt / 2);
        two.step(dt / 2);
        d.push_back(test::max_abs(one.state().values - two.state().values));
    }
    MESSAGE("composition " << d[0] << " " << d[1]);
    CHECK(d[0] / d[1] >= 6.0);
}

TEST_CASE("run_inviscid: identity, errors and mass") {
    const Grid g(2, 128, 8.0);
    const ScalarField rho0 = sample_radial(g, gaussian_profile(1.0, 0.5, 2.0));
    const Trajectory z = run_inviscid(rho0, inviscid_params(0.0, 0.01));
    CHECK((z.final_state.values == rho0.values).all());
    CHECK_THROWS_AS(run_inviscid(rho0, inviscid_params(0.95, 0.01)), BlowupImminent);

    SimParams p = inviscid_params(0.5, 0.01, -1.0, 0.0);
    const Trajectory t = run_inviscid(rho0, p);
    const double m0 = t.ledger.mass.front();
    const std::vector<double> res = t.ledger.residuals(-1.0);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, std::abs(r));
    MESSAGE("inviscid mass identity residual " << worst / m0);
    CHECK(worst <= 1e-4 * m0);
    CHECK(t.amplitude_bound_holds(0.0));

    const Grid f(2, 256, 8.0);
    const ScalarField fine0 = sample_radial(f, gaussian_profile(1.0, 0.5, 2.0));
    const Trajectory a = run_inviscid(fine0, inviscid_params(0.5, 0.01));
    const double fm0 = a.ledger.mass.front();
    MESSAGE("AG inviscid mass drift " << (a.ledger.mass.back() - fm0) / fm0);
    CHECK(std::abs(a.ledger.mass.back() - fm0) <= 1e-4 * fm0);
    CHECK(a.amplitude_bound_holds(1.0));
}

TEST_CASE("positivity monitor") {
    // a sharp step interpolated by cubics undershoots
    const Grid g(2, 64, 4.0);
    ScalarField rho(g);
    const Eigen::MatrixXd x = g.node_coordinates();
    for (Eigen::Index p = 0; p < g.size(); ++p) rho.values(p) = std::hypot(x(0, p) - 2.0, x(1, p) - 2.0) < 0.6 ? 1.0 : 0.0;
    CHECK_THROWS_AS(run_inviscid(rho, inviscid_params(0.3, 0.02)), PositivityViolated);
}

TEST_CASE("along-flow amplitude law on tracers") {
    const Grid g(2, 128, 8.0);
    const ScalarField rho0 = two_bumps(g, 1.0, 0.5, 2.0);
    const double sup0 = rho0.values.maxCoeff();
    const double t_end = 0.45 / sup0;
    const SimParams p = inviscid_params(t_end, 0.01);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(2.5, 5.5);
    Eigen::MatrixXd pts(2, 200);
    for (int c = 0; c < 200; ++c) pts.col(c) << u(rng), u(rng);
    const Eigen::ArrayXd carried0 = interpolate(rho0, pts);

    InviscidStepper st(rho0, p);
    double t = 0.0;
    const int steps = static_cast<int>(std::ceil(t_end / p.dt));
    const double dt = t_end / steps;
    for (int s = 0; s < steps; ++s) {
        pts = advance_points(pts, st.velocity(), st.previous_velocity(), dt);
        st.step(dt);
        t += dt;
    }
    const Eigen::ArrayXd got = interpolate(st.state(), pts);
    const Eigen::ArrayXd expect = carried0 / (1.0 - p.sigma2 * t * carried0);
    double worst = 0.0;
    for (int c = 0; c < 200; ++c) {
        if (carried0(c) > 1e-3 * sup0) worst = std::max(worst, std::abs(got(c) - expect(c)) / expect(c));
    }
    MESSAGE("tracer mismatch " << worst);
    CHECK(worst <= 1e-2);
}

TEST_CASE("patch volume law") {
    const Grid g(2, 256, 4.0);
    const ScalarField rho0 = sample_radial(g, patch_profile(1.0, 0.5, 2 * g.spacing()));
    const Trajectory t = run_inviscid(rho0, inviscid_params(0.5, 0.01));
    // level: half the carried patch density c / (1 - σ2 t c)
    const double level = 0.5 * 1.0 / (1.0 - 0.5);
    const double area = (t.final_state.values > level).cast<double>().sum() * g.cell_volume();
    const double expect = std::numbers::pi * 0.25 * jacobian_along_flow(1.0, -1.0, 1.0, 0.5);
    MESSAGE("patch {rho > c(t)/2} area " << area << " vs " << expect);
    CHECK(std::abs(area - expect) <= 0.03 * expect);
}

TEST_CASE("Hölder norm stays inside its regression envelope") {
    const Grid g(2, 128, 8.0);
    const ScalarField rho0 = sample_radial(g, gaussian_profile(1.0, 0.5, 2.0));
    SimParams p = inviscid_params(0.5, 0.01);
    p.snapshot_every = 10;
    const Trajectory t = run_inviscid(rho0, p);
    const double h0 = holder_star_norm(rho0, 0.5);
    double worst = 0.0;
    for (const auto& s : t.snapshots) {
        worst = std::max(worst, holder_star_norm(s, 0.5) / (h0 * amplitude_envelope(1.0, 1.0, s.time)));
    }
    MESSAGE("holder ratio to envelope " << worst);
    CHECK(worst <= 1.5);
}

TEST_CASE("grid refinement") {
    const RadialProfile prof = gaussian_profile(1.0, 0.4, 1.6);
    std::vector<ScalarField> sols;
    for (int n : {64, 128, 256}) {
        const Grid g(2, n, 8.0);
        sols.push_back(run_inviscid(sample_radial(g, prof), inviscid_params(0.3, 0.01)).final_state);
    }
    auto coarse_diff = [](const ScalarField& c, const ScalarField& f) {
        const Grid& gc = c.grid;
        Eigen::ArrayXd d(gc.size());
        for (Eigen::Index p = 0; p < gc.size(); ++p) {
            auto i = gc.unravel(p);
            for (int a = 0; a < 2; ++a) i[a] *= 2;
            d(p) = c.values(p) - f.values(f.grid.ravel(i));
        }
        return l2(d, gc);
    };
    const double e1 = coarse_diff(sols[0], sols[1]);
    const double e2 = coarse_diff(sols[1], sols[2]);
    MESSAGE("refinement " << e1 << " " << e2);
    CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("jacobian along flow") {
    CHECK(jacobian_along_flow(1.3, -1.0, 1.0, 0.0) == 1.0);
    CHECK(jacobian_along_flow(1.0, -1.0, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(jacobian_along_flow(2.0, 1.0, 0.0, 0.3) == doctest::Approx(std::exp(0.6)).epsilon(1e-14));
    CHECK_THROWS_AS(jacobian_along_flow(2.0, -1.0, 1.0, 0.5), DomainError);
    // det' = σ1 ρ det with ρ = ρ0 / (1 - σ2 t ρ0), integrated by RK4
    for (auto [r0, s1, s2, T] : {std::tuple{0.7, -1.0, 2.0, 0.4}, std::tuple{1.5, 0.5, -0.8, 1.0}}) {
        double J = 1.0, t = 0.0;
        const int n = 2000;
        const double h = T / n;
        auto f = [&](double s, double j) { return s1 * r0 / (1.0 - s2 * s * r0) * j; };
        for (int k = 0; k < n; ++k) {
            const double k1 = f(t, J), k2 = f(t + h / 2, J + h / 2 * k1), k3 = f(t + h / 2, J + h / 2 * k2),
                         k4 = f(t + h, J + h * k3);
            J += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            t += h;
        }
        CHECK(jacobian_along_flow(r0, s1, s2, T) == doctest::Approx(J).epsilon(1e-10));
    }
}
