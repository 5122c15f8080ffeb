#include <doctest.h>

#include <cmath>
#include <random>

#include "lrnewton/errors.hpp"
#include "lrnewton/problem.hpp"
#include "oracles.hpp"

using namespace lrn;

namespace {

ModelConfig small_config(std::size_t nf = 20, std::size_t ns = 15) {
    ModelConfig cfg;
    cfg.n_f = nf;
    cfg.n_s = ns;
    return cfg;
}

// States near the physical regime: 1 on the fluid side, small on the solid side.
Vector random_state(std::size_t n, std::mt19937_64& rng) {
    auto x = oracle::random_vector(n, rng, -0.5, 1.5);
    return x;
}

}  // namespace

TEST_CASE("model dimensions and ordering") {
    const auto p = build_burgers_fsi_1d(small_config());
    CHECK(p.n_dof() == 20 + 15 - 1);
    CHECK(p.dirichlet_rhs()[0] == 1.0);
    for (std::size_t i = 1; i < p.n_dof(); ++i) CHECK(p.dirichlet_rhs()[i] == 0.0);
    CHECK(p.mu_ref() == 0.0);
    CHECK(p.rho_f() == 12.5);
    CHECK(p.nonlinear().fluid_block().begin == 0);
    CHECK(p.nonlinear().fluid_block().end == 20);
}

TEST_CASE("default preset has 399 unknowns") {
    CHECK(build_burgers_fsi_1d(ModelConfig{}).n_dof() == 399);
}

TEST_CASE("residual is affine in mu") {
    const auto p = build_burgers_fsi_1d(small_config());
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> mu(2e4, 6e4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_state(p.n_dof(), rng);
        const double m1 = mu(rng);
        const double m2 = mu(rng);
        const auto g1 = residual(p, x, m1);
        const auto g2 = residual(p, x, m2);
        const auto a1x = spmv(p.a1(), x);
        const double scale = std::max(norm_inf(g1), norm_inf(g2)) + 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs((g1[i] - g2[i]) - (m1 - m2) * a1x[i]) <= 1e-12 * scale);
    }
}

TEST_CASE("jacobian matches central finite differences") {
    const auto p = build_burgers_fsi_1d(small_config());
    std::mt19937_64 rng(22);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_state(p.n_dof(), rng);
        const double mu = 2e4 + 2e3 * trial;
        const auto j = jacobian(p, x, mu);
        for (int dir = 0; dir < 5; ++dir) {
            auto d = oracle::random_vector(p.n_dof(), rng);
            const double dn = norm2(d);
            for (auto& v : d) v /= dn;
            const auto gp = residual(p, combine(1.0, x, h, d), mu);
            const auto gm = residual(p, combine(1.0, x, -h, d), mu);
            const auto fd = combine(0.5 / h, gp, -0.5 / h, gm);
            const auto jd = spmv(j, d);
            CHECK(norm2(combine(1.0, fd, -1.0, jd)) <= 1e-6 * std::max(1.0, norm2(jd)));
        }
    }
}

TEST_CASE("jacobian is the sum of its parts") {
    const auto p = build_burgers_fsi_1d(small_config());
    std::mt19937_64 rng(23);
    const auto x = random_state(p.n_dof(), rng);
    const double mu = 37000.0;
    const DenseMatrix j = jacobian(p, x, mu).to_dense();
    const DenseMatrix a0 = p.a0().to_dense();
    const DenseMatrix a1 = p.a1().to_dense();
    const DenseMatrix c = assemble_conv(p, x).to_dense();
    for (std::size_t r = 0; r < j.rows(); ++r)
        for (std::size_t k = 0; k < j.cols(); ++k) {
            const double ref = a0(r, k) + mu * a1(r, k) + p.rho_f() * c(r, k);
            CHECK(std::abs(j(r, k) - ref) <= 1e-12 * (std::abs(ref) + mu));
        }
}

TEST_CASE("convection jacobian lives on the fluid block and is linear in x") {
    const auto p = build_burgers_fsi_1d(small_config());
    std::mt19937_64 rng(24);
    const auto x = random_state(p.n_dof(), rng);
    const auto block = p.nonlinear().fluid_block();
    const DenseMatrix c = assemble_conv(p, x).to_dense();
    for (std::size_t r = 0; r < c.rows(); ++r)
        for (std::size_t k = 0; k < c.cols(); ++k)
            if (!block.contains(r) || !block.contains(k)) CHECK(c(r, k) == 0.0);
    auto x2 = x;
    for (auto& v : x2) v *= -2.5;
    const DenseMatrix c2 = assemble_conv(p, x2).to_dense();
    for (std::size_t k = 0; k < c.data().size(); ++k) CHECK(c2.data()[k] == doctest::Approx(-2.5 * c.data()[k]));
    CHECK_THROWS_AS(assemble_conv(p, Vector(3, 0.0)), DimensionMismatch);
}

TEST_CASE("A1 does not depend on the fluid constants or the inflow") {
    const auto base = build_burgers_fsi_1d(small_config());
    auto cfg = small_config();
    cfg.constants.rho_f = 3.0;
    cfg.constants.nu_f = 0.2;
    cfg.v_in = 4.0;
    const auto other = build_burgers_fsi_1d(cfg);
    CHECK(other.a1() == base.a1());
}

TEST_CASE("homogeneous inflow has the zero root") {
    auto cfg = small_config();
    cfg.v_in = 0.0;
    const auto p = build_burgers_fsi_1d(cfg);
    const Vector zero(p.n_dof(), 0.0);
    for (double mu : {2e4, 4e4, 6e4}) CHECK(norm2(residual(p, zero, mu)) == 0.0);
}

TEST_CASE("relative residual normalization") {
    const auto p = build_burgers_fsi_1d(small_config());
    CHECK(relative_residual(p, p.dirichlet_rhs(), 4e4) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(reference_residual_norm(p, 4e4) > 0.0);
}

TEST_CASE("poisson ratio") {
    CHECK(poisson_ratio(2e5, 2e4) == doctest::Approx(0.45455).epsilon(1e-5));
    CHECK(poisson_ratio(2e5, 6e4) == doctest::Approx(0.38462).epsilon(1e-5));
}

TEST_CASE("model configuration validation") {
    auto cfg = small_config();
    cfg.model = "navier-stokes-3d";
    CHECK_THROWS_AS(build_burgers_fsi_1d(cfg), InvalidArgument);
    cfg = small_config(1, 10);
    CHECK_THROWS_AS(build_burgers_fsi_1d(cfg), InvalidArgument);
    cfg = small_config();
    cfg.mu_min = 5e4;
    cfg.mu_max = 4e4;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.constants.nu_f = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.mu_values = std::vector<double>{3e4, 2e4};
    CHECK_THROWS_AS(cfg.parameters(), InvalidArgument);
    cfg.mu_values = std::vector<double>{2e4, 3e4};
    CHECK(cfg.parameters().size() == 2);
}
