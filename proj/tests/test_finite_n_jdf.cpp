#include "elk/finite_n_jdf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace elk;

namespace {

// Appendix-style N=2 closed form of the joint density in q
double jdf_q_n2_closed(double tau, double z, double q) {
    return 1.0 / (2.0 * std::sqrt(2.0 * M_PI) * (1.0 + tau)) *
           std::exp(-z * z / (2.0 * (1.0 + tau)) * (1.0 + q / (1.0 + q))) /
           std::sqrt(q * (1.0 + q)) *
           (z * z / ((1.0 + q) * (1.0 + q)) + (1.0 + tau) / (1.0 + q));
}

}  // namespace

TEST(JdfQ, ClosedFormN2) {
    // frozen: 1/(2 sqrt(2pi)) * 2^{-3/2}
    EXPECT_NEAR(jdf_q(EnsembleParams(2, 0.5), 0.0, 1.0), 0.07052369794346953586851, 1e-16);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> taus(0.0, 0.99), zs(-3.0, 3.0), qs(0.01, 50.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double tau = taus(rng), z = zs(rng), q = qs(rng);
        EXPECT_NEAR(jdf_q(EnsembleParams(2, tau), z, q) / jdf_q_n2_closed(tau, z, q), 1.0, 1e-12)
            << tau << " " << z << " " << q;
    }
}

TEST(JdfQ, SmallQSingularityIsIntegrable) {
    // q^{-1/2} envelope at N=2: jdf * sqrt(q) tends to a positive constant
    const EnsembleParams params(2, 0.3);
    double prev = 0.0;
    for (const double q : {1e-4, 1e-6, 1e-8, 1e-10}) {
        const double v = jdf_q(params, 0.7, q) * std::sqrt(q);
        EXPECT_GT(v, 0.0);
        if (prev != 0.0) EXPECT_NEAR(v / prev, 1.0, 1e-3);
        prev = v;
    }
}

TEST(JdfQ, MatchesIndependentOracles) {
    // frozen 50-digit oracle of the exact formula
    EXPECT_NEAR(jdf_q(EnsembleParams(4, 0.9), 1.0, 0.3) / 0.2442872424274059407197, 1.0, 1e-12);
    EXPECT_NEAR(jdf_q(EnsembleParams(10, 0.9), 1.0, 0.7) / 0.03063950182463067362099, 1.0, 1e-12);
    EXPECT_NEAR(jdf_q(EnsembleParams(3, 0.9), 0.5, 0.2) / 0.3429420614357664202469, 1.0, 1e-12);
    // in-test long-double transcription, randomized
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> taus(0.05, 0.95), qs(0.05, 20.0);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 12);
        const double tau = taus(rng), q = qs(rng);
        std::uniform_real_distribution<double> zs(-1.5 * std::sqrt(n), 1.5 * std::sqrt(n));
        const double z = zs(rng);
        const double ref = static_cast<double>(oracle::jdf_q_naive(n, tau, z, q));
        EXPECT_NEAR(jdf_q(EnsembleParams(n, tau), z, q) / ref, 1.0, 1e-10)
            << n << " " << tau << " " << z << " " << q;
    }
}

TEST(JdfQ, RejectsBadArguments) {
    EXPECT_THROW(jdf_q(EnsembleParams(2, 0.5), 0.0, 0.0), std::domain_error);
    EXPECT_THROW(jdf_q(EnsembleParams(2, 0.5), 0.0, -0.5), std::domain_error);
    EXPECT_THROW(jdf_q(EnsembleParams(1, 0.5), 0.0, 1.0), std::domain_error);
    EXPECT_THROW(jdf_q(EnsembleParams(2, 1.0), 0.0, 1.0), unsupported_error);
}

TEST(JdfT, ChangeOfVariables) {
    // tau = 0: t and q coincide
    EXPECT_DOUBLE_EQ(jdf_t(EnsembleParams(2, 0.0), 0.0, 1.0), jdf_q(EnsembleParams(2, 0.0), 0.0, 1.0));
    // t = (1 - tau) q: density of t picks up 1/(1-tau) at q = t/(1-tau).
    // (The source text prints the inverse relation; direct 2x2 Monte Carlo and
    // the bulk corollary both require this orientation — see README.)
    const EnsembleParams params(2, 0.5);
    EXPECT_DOUBLE_EQ(jdf_t(params, 0.0, 2.0), 2.0 * jdf_q(params, 0.0, 4.0));
    const JdfPoint p = jdf_point(params, 0.4, 2.0);
    EXPECT_DOUBLE_EQ(p.q, 4.0);
    EXPECT_DOUBLE_EQ(p.t, 2.0);
    EXPECT_DOUBLE_EQ(p.density, jdf_t(params, 0.4, 2.0));
}

TEST(JdfT, JacobianPreservesMass) {
    // int jdf_t dt = int jdf_q dq at (N=3, tau=0.9, z=0.5)
    const EnsembleParams params(3, 0.9);
    const double z = 0.5;
    auto fq = [&](double u) {
        const double s = 1.0 - u * u;
        return jdf_q(params, z, u * u / s) * 2.0 * u / (s * s);
    };
    auto ft = [&](double u) {
        const double s = 1.0 - u * u;
        return jdf_t(params, z, u * u / s) * 2.0 * u / (s * s);
    };
    const double mq = integrate(fq, 0.0, 1.0, 1e-12, 1e-11).value;
    const double mt = integrate(ft, 0.0, 1.0, 1e-12, 1e-11).value;
    EXPECT_NEAR(mq / mt, 1.0, 1e-9);
}

TEST(JdfT, LargeOverlapTail) {
    // t^2 jdf_t approaches a finite positive limit (the t^-2 tail)
    for (const auto& [n, tau] : {std::pair{4, 0.5}, {10, 0.9}}) {
        const EnsembleParams params(n, tau);
        const double v1 = 1e6 * 1e6 * jdf_t(params, 0.5, 1e6);
        const double v2 = 1e8 * 1e8 * jdf_t(params, 0.5, 1e8);
        EXPECT_GT(v1, 0.0);
        EXPECT_NEAR(v2 / v1, 1.0, 1e-2);
    }
}

TEST(Marginal, KnownValuesAndClosedFormN2) {
    // z = 0: second Appendix term vanishes
    EXPECT_NEAR(marginal_density(EnsembleParams(2, 0.5), 0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-10);
    EXPECT_NEAR(marginal_density(EnsembleParams(2, 0.9), 0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-10);
    // frozen oracle for the closed form at (tau=0.5, z=1)
    EXPECT_NEAR(marginal_density_n2(0.5, 1.0) / 0.37617885123144198218, 1.0, 1e-13);
    for (const double z : {-2.5, -1.0, 0.0, 0.3, 1.0, 2.2}) {
        EXPECT_NEAR(marginal_density(EnsembleParams(2, 0.5), z) / marginal_density_n2(0.5, z), 1.0,
                    1e-8)
            << z;
    }
    // frozen oracle for the N=3 quadrature marginal
    EXPECT_NEAR(marginal_density(EnsembleParams(3, 0.9), 0.5) / 0.4883910062569282126791, 1.0, 1e-8);
}

TEST(FnDensity, ValuesParityAndOddRejection) {
    EXPECT_NEAR(fn_density(EnsembleParams(2, 0.5), 0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-12);
    EXPECT_NEAR(fn_density(EnsembleParams(2, 0.5), 1.0) / 0.37617885123144198218, 1.0, 1e-11);
    EXPECT_NEAR(fn_density(EnsembleParams(4, 0.9), 1.0) / 0.5468448302454937371849, 1.0, 1e-11);
    EXPECT_NEAR(fn_density(EnsembleParams(10, 0.9), 1.0) / 0.7662814999920778350508, 1.0, 1e-11);
    for (const double z : {0.4, 1.3, 2.9, 5.5}) {
        EXPECT_NEAR(fn_density(EnsembleParams(8, 0.6), z), fn_density(EnsembleParams(8, 0.6), -z),
                    1e-12)
            << z;
    }
    EXPECT_THROW(fn_density(EnsembleParams(3, 0.9), 0.5), unsupported_error);
    EXPECT_THROW(fn_density(EnsembleParams(7, 0.9), 0.5), unsupported_error);
}

TEST(Marginal, AgreesWithFnDensityAcrossBulk) {
    for (const int n : {2, 4, 10}) {
        const EnsembleParams params(n, 0.9);
        const double edge = (1.0 + params.tau) * std::sqrt(static_cast<double>(n));
        for (int i = 0; i < 9; ++i) {
            const double z = -0.8 * edge + i * (1.6 * edge / 8.0);
            const double fn = fn_density(params, z);
            const double mg = marginal_density(params, z, 1e-12, 1e-10);
            EXPECT_LE(std::abs(mg - fn) / fn, 1e-6) << n << " z=" << z;
        }
    }
}

TEST(JdfQ, NonnegativeOnRandomGrid) {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> taus(0.0, 0.97), qs(1e-3, 1e3);
    for (int rep = 0; rep < 10000; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 19);
        const double tau = taus(rng);
        std::uniform_real_distribution<double> zs(-2.2 * std::sqrt(n), 2.2 * std::sqrt(n));
        const double z = zs(rng), q = qs(rng);
        EXPECT_GE(jdf_q(EnsembleParams(n, tau), z, q), 0.0) << n << " " << tau << " " << z << " " << q;
    }
}

TEST(JdfQ, TotalMassMatchesMeanRealCount) {
    // int int jdf_t dz dt = int fn_density dz at tau = 0.9
    for (const int n : {2, 4, 10}) {
        const EnsembleParams params(n, 0.9);
        const double span = (1.0 + params.tau) * std::sqrt(static_cast<double>(n)) + 8.0;
        const double mean_count =
            integrate([&](double z) { return fn_density(params, z); }, -span, span, 1e-11, 1e-9).value;
        const double mass =
            integrate([&](double z) { return marginal_density(params, z, 1e-12, 1e-10); }, -span,
                      span, 1e-9, 1e-8)
                .value;
        EXPECT_NEAR(mass / mean_count, 1.0, 1e-6) << n;
    }
}

TEST(JdfQ, BracketTermsExposedForDebugging) {
    const JdfTerms t = jdf_q_terms(EnsembleParams(4, 0.9), 1.0, 0.3);
    EXPECT_EQ(t.bracket.size(), 5u);
    ScaledKahanSum sum;
    for (const auto& b : t.bracket) sum.add(b);
    EXPECT_NEAR(std::exp(t.log_prefactor + sum.total().log_abs) / t.value, 1.0, 1e-13);
}
