#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fujita/error.hpp"
#include "fujita/integrator.hpp"
#include "fujita/supersolution.hpp"
#include "fujita/thresholds.hpp"

using namespace fujita;

namespace {

SuperSolutionParams lap3(double amplitude) {
    SuperSolutionParams p;
    p.amplitude = amplitude;
    p.t0 = 1.0;
    p.mu = 1.0;
    p.p = 2.0;
    return p;
}

const DomainSpec kBall3 = DomainSpec::exterior_ball(3, 1.0);

// Fourth-order central differences of U in r and t, independent of the closed forms.
double d_dt(const SuperSolutionParams& p, double r, double t, double h = 1e-3) {
    auto u = [&](double s) { return supersolution_value(p, r, s); };
    return (-u(t + 2 * h) + 8 * u(t + h) - 8 * u(t - h) + u(t - 2 * h)) / (12 * h);
}

double d_dr(const SuperSolutionParams& p, double r, double t, double h = 1e-3) {
    auto u = [&](double s) { return supersolution_value(p, s, t); };
    return (-u(r + 2 * h) + 8 * u(r + h) - 8 * u(r - h) + u(r - 2 * h)) / (12 * h);
}

double d2_dr2(const SuperSolutionParams& p, double r, double t, double h = 1e-3) {
    auto u = [&](double s) { return supersolution_value(p, s, t); };
    return (-u(r + 2 * h) + 16 * u(r + h) - 30 * u(r) + 16 * u(r - h) - u(r - 2 * h)) / (12 * h * h);
}

}  // namespace

TEST(Mu, Examples) {
    EXPECT_DOUBLE_EQ(mu(3.0, 0.0, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(mu(2.0, 0.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(mu(2.0, 1.0, 2.0), 3.0);
    EXPECT_THROW(mu(1.0, 0.0, 0.0), InvalidArgument);
    EXPECT_THROW(mu(0.5, 0.0, 0.0), InvalidArgument);
}

TEST(Mu, PropertyExponentIdentity) {
    // s/2 + q - mu (p - 1) = -1, exactly in rationals.
    for (int p4 = 5; p4 <= 20; ++p4) {
        for (int q = 0; q <= 3; ++q) {
            for (int s = 0; s <= 4; ++s) {
                const Rational p(p4, 4);
                const Rational m = supersolution_mu<Rational>(p, Rational(q), Rational(s));
                EXPECT_EQ(Rational(s, 2) + Rational(q) - m * (p - 1), Rational(-1));
            }
        }
    }
}

TEST(SelectT0, Examples) {
    EXPECT_EQ(select_t0(DomainSpec::exterior_ball(3, 1.0), 0.0), 1.0);
    EXPECT_EQ(select_t0(DomainSpec::exterior_ball(3, 5.0), 1.0), 1.0);
    EXPECT_EQ(select_t0(DomainSpec::two_ray(1.0), 0.0), 1.0);
    // General boundary with x.nu > 0 somewhere.
    EXPECT_EQ(select_t0(4.0, 1.0), 2.0);
    EXPECT_EQ(select_t0(1.0, 1.0), 1.0);
    EXPECT_THROW(select_t0(1.0, 0.0), HypothesisFailed);
}

TEST(OverestimationConstant, MatchesBruteForceMaximum) {
    for (double p : {1.5, 2.0, 3.0}) {
        for (double s : {0.0, 0.5, 2.0, 3.0}) {
            for (double tau : {0.5, 1.0, 7.0}) {
                double best = 0.0;
                for (int i = 0; i <= 200000; ++i) {
                    const double r = 60.0 * i / 200000.0;
                    const double v = std::pow(r, s) * std::exp(-(p - 1.0) * r * r / (4.0 * tau)) * std::pow(tau, -s / 2.0);
                    best = std::max(best, v);
                }
                EXPECT_NEAR(overestimation_constant(p, s), best, 1e-6 * std::max(1.0, best));
            }
        }
    }
    EXPECT_NEAR(overestimation_constant(2.0, 2.0), 4.0 / std::exp(1.0), 1e-15);
}

TEST(AmplitudeBound, Examples) {
    EXPECT_DOUBLE_EQ(amplitude_bound(1.5, 1.0, 2.0, 0.0), 0.5);
    EXPECT_NEAR(amplitude_bound(2.0, 0.5, 2.0, 2.0), 1.5 * std::exp(1.0) / 4.0, 1e-14);
    EXPECT_NEAR(amplitude_bound(2.0, 0.5, 2.0, 2.0), 1.0193, 1e-4);
    EXPECT_THROW(amplitude_bound(0.5, 1.0, 2.0, 0.0), HypothesisFailed);
    EXPECT_THROW(amplitude_bound(1.0, 1.0, 2.0, 0.0), HypothesisFailed);
}

TEST(SelectParams, LaplacianThreeDim) {
    const auto g = build_grid(kBall3, 10.0, 100);
    const auto params = select_params(OperatorSpec::laplacian(2.0), kBall3, g, 1.0, 0.9);
    EXPECT_DOUBLE_EQ(params.amplitude, 0.45);
    EXPECT_EQ(params.mu, 1.0);
    EXPECT_EQ(params.t0, 1.0);
    EXPECT_THROW(select_params(OperatorSpec::laplacian(1.5), kBall3, g, 1.0, 0.9), HypothesisFailed);
    EXPECT_THROW(select_params(OperatorSpec::laplacian(2.0), kBall3, g, 1.0, 0.0), InvalidArgument);
}

TEST(Evaluate, ClosedFormsMatchFiniteDifferences) {
    OperatorSpec spec;
    spec.a = Coefficient::saturating(1.0, 0.7);
    spec.drift = Coefficient::inverse_power(0.0, -0.4, 1.0);
    auto params = lap3(0.8);
    params.mu = 1.3;
    for (double r : {1.0, 1.7, 3.2, 6.0}) {
        for (double t : {0.2, 1.0, 4.5}) {
            const auto v = evaluate(params, spec, kBall3, r, t);
            EXPECT_NEAR(v.u, supersolution_value(params, r, t), 0.0);
            EXPECT_NEAR(v.du_dt, d_dt(params, r, t), 1e-9);
            // L U = a U'' + (a' + (N-1) a / r + b) U'.
            const double a = spec.a(r);
            const double lu = a * d2_dr2(params, r, t) +
                              (spec.a.derivative(r) + 2.0 * a / r + spec.drift(r)) * d_dr(params, r, t);
            EXPECT_NEAR(v.lu, lu, 1e-8);
        }
    }
}

TEST(Evaluate, NormalDerivativeAtInnerBoundary) {
    const auto params = lap3(1.0);
    const auto v = evaluate(params, OperatorSpec::laplacian(2.0), kBall3, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(v.du_dnu, 0.5 * v.u);
    // nu = -e_r at r = R.
    EXPECT_NEAR(v.du_dnu, -d_dr(params, 1.0, 0.0), 1e-10);
}

TEST(Evaluate, ValueAtOrigin) {
    auto params = lap3(2.0);
    params.mu = 1.5;
    EXPECT_DOUBLE_EQ(supersolution_value(params, 0.0, 3.0), 2.0 * std::pow(4.0, -1.5));
}

TEST(VerifyInterior, HeatKernelShapeIsExact) {
    auto params = lap3(1.0);
    params.mu = 1.5;
    const auto cert = verify_interior(params, OperatorSpec::laplacian(2.0), kBall3, SampleBox{}, 1e-12, false);
    EXPECT_TRUE(cert.pass);
    EXPECT_LE(std::abs(cert.min_residual), 1e-12);
    // The absolute residual is also tiny everywhere, not just at the minimum.
    for (double r : radial_samples(1.0, SampleBox{})) {
        for (double t : {0.0, 0.3, 9.0}) {
            const auto v = evaluate(params, OperatorSpec::laplacian(2.0), kBall3, r, t);
            EXPECT_LE(std::abs(v.du_dt - v.lu), 1e-12 * std::max(1.0, v.u));
        }
    }
}

TEST(VerifyInterior, BelowAndAboveAmplitudeBound) {
    const auto lap = OperatorSpec::laplacian(2.0);
    const auto pass = verify_interior(lap3(0.45), lap, kBall3, SampleBox{});
    EXPECT_TRUE(pass.pass);
    EXPECT_GT(pass.min_residual, 0.0);
    EXPECT_EQ(pass.radial_samples, 400u);
    EXPECT_EQ(pass.time_samples, 200u);
    EXPECT_TRUE(verify_interior(lap3(0.5), lap, kBall3, SampleBox{}).pass);
    EXPECT_FALSE(verify_interior(lap3(0.55), lap, kBall3, SampleBox{}).pass);
    const auto big = verify_interior(lap3(10.0), lap, kBall3, SampleBox{});
    EXPECT_FALSE(big.pass);
    EXPECT_EQ(big.at_r, 1.0);
}

TEST(VerifyInterior, PropertyResidualDecreasesWithAmplitude) {
    const auto lap = OperatorSpec::laplacian(2.0);
    double previous = std::numeric_limits<double>::infinity();
    for (double a : {0.05, 0.1, 0.2, 0.3, 0.45, 0.5, 0.6, 1.0, 3.0}) {
        const auto cert = verify_interior(lap3(a), lap, kBall3, SampleBox{});
        EXPECT_LT(cert.min_residual, previous);
        previous = cert.min_residual;
    }
}

TEST(VerifyInterior, PropertyAnyAdmissibleAmplitudePasses) {
    // With weights: every A <= A_max certifies.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double p = 1.8 + 2.0 * u(rng);
        const double q = u(rng) < 0.5 ? 0.0 : u(rng);
        const double s = u(rng) < 0.5 ? 0.0 : 2.0 * u(rng);
        OperatorSpec op = OperatorSpec::laplacian(p, q, s);
        const auto g = build_grid(DomainSpec::exterior_ball(6, 1.0), 10.0, 50);
        const double gamma = gamma0(op, DomainSpec::exterior_ball(6, 1.0), g).value;
        const double m = mu(p, q, s);
        if (!(gamma > m)) continue;
        SuperSolutionParams params;
        params.p = p;
        params.q = q;
        params.s = s;
        params.mu = m;
        params.t0 = 1.0;
        params.amplitude = u(rng) * amplitude_bound(gamma, m, p, s);
        EXPECT_TRUE(verify_interior(params, op, DomainSpec::exterior_ball(6, 1.0), SampleBox{}).pass);
    }
}

TEST(VerifyBoundary, Examples) {
    const auto params = lap3(0.45);
    const auto zero = verify_boundary(params, TimeCoefficient::constant(0.0), kBall3, SampleBox{});
    EXPECT_TRUE(zero.pass);
    EXPECT_NEAR(zero.min_residual, 1.0 / 22.0, 1e-15);

    const TimeCoefficient critical([](double t) { return -1.0 / (2.0 * (t + 1.0)); }, -0.5, "critical");
    const auto edge = verify_boundary(params, critical, kBall3, SampleBox{});
    EXPECT_TRUE(edge.pass);
    EXPECT_NEAR(edge.min_residual, 0.0, 1e-15);

    const auto negative = verify_boundary(params, TimeCoefficient::constant(-1.0), kBall3, SampleBox{});
    EXPECT_FALSE(negative.pass);
}

TEST(AdmissibleInitialData, Examples) {
    const auto g = build_grid(kBall3, 10.0, 90);
    const auto params = lap3(0.45);
    EXPECT_TRUE(admissible_initial_data(Field{std::vector<double>(g.size(), 0.0), 0.0}, params, g));
    auto exact = restrict_initial_data([&](double r) { return supersolution_value(params, r, 0.0); }, g);
    EXPECT_TRUE(admissible_initial_data(exact, params, g));
    for (double& v : exact.values) v *= 2.0;
    EXPECT_FALSE(admissible_initial_data(exact, params, g));
    const auto cert = verify_initial_data(exact, params, g);
    EXPECT_FALSE(cert.pass);
    EXPECT_EQ(cert.at_r, 1.0);
}

TEST(SuperSolutionProperty, DominatesTheDiscreteSolution) {
    const auto g = build_grid(kBall3, 20.0, 300);
    const auto params = lap3(0.45);
    const auto phi = restrict_initial_data([&](double r) { return supersolution_value(params, r, 0.0); }, g);
    SolverConfig cfg;
    cfg.t_max = 20.0;
    cfg.output_interval = 1.0;
    // Backward Euler smears the far tail (U ~ 1e-20 there) above U by orders of magnitude at early times.
    cfg.theta = 0.5;
    const auto out = run(make_problem(g, OperatorSpec::laplacian(2.0),
                                      BoundaryCondition::robin(TimeCoefficient::constant(1.0))),
                         phi, cfg, {true});
    ASSERT_EQ(out.kind, RunOutcome::Kind::Global);
    for (const auto& snap : out.snapshots) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            ASSERT_LE(snap.values[i], supersolution_value(params, g.node(i), snap.t) * 1.01);
        }
    }
}
