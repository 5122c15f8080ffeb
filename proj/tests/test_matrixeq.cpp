#include <doctest.h>

#include <cmath>
#include <random>

#include "lrnewton/errors.hpp"
#include "lrnewton/matrixeq.hpp"
#include "lrnewton/newton.hpp"
#include "lrnewton/problem.hpp"
#include "oracles.hpp"

using namespace lrn;

namespace {

ParametricProblem model(std::size_t nf, std::size_t ns, double v_in = 1.0) {
    ModelConfig cfg;
    cfg.n_f = nf;
    cfg.n_s = ns;
    cfg.v_in = v_in;
    return build_burgers_fsi_1d(cfg);
}

Vector median_state(const ParametricProblem& p, double mu, double tol = 1e-4) {
    NewtonConfig cfg;
    cfg.tol = tol;
    const auto r = newton_solve(p, mu, cfg);
    REQUIRE(r.converged);
    return r.x;
}

SparseMatrix diagonal(const std::vector<double>& d) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
    return SparseMatrix::from_triplets(d.size(), d.size(), std::move(t));
}

DenseMatrix dense_apply_oracle(const SylvesterOperator& op, const DenseMatrix& s) {
    DenseMatrix out(s.rows(), s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j) {
        const DenseMatrix a = op.system_matrix(op.shifts()[j]).to_dense();
        const auto y = oracle::matvec(a, std::vector<double>(s.column(j).begin(), s.column(j).end()));
        for (std::size_t i = 0; i < y.size(); ++i) out(i, j) = y[i];
    }
    return out;
}

DenseMatrix direct_oracle(const SylvesterOperator& op, const DenseMatrix& rhs) {
    DenseMatrix out(rhs.rows(), rhs.cols());
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
        const auto x = oracle::gauss_solve(op.system_matrix(op.shifts()[j]).to_dense(),
                                           std::vector<double>(rhs.column(j).begin(), rhs.column(j).end()));
        for (std::size_t i = 0; i < x.size(); ++i) out(i, j) = x[i];
    }
    return out;
}

double rel_error(const DenseMatrix& a, const DenseMatrix& ref) {
    return oracle::frobenius(subtract(a, ref)) / oracle::frobenius(ref);
}

}  // namespace

TEST_SUITE("right-hand side and operator") {
    TEST_CASE("rhs has rank at most two and its columns are negated residuals") {
        const auto p = model(30, 20);
        std::mt19937_64 rng(31);
        const auto x = oracle::random_vector(p.n_dof(), rng);
        const std::vector<double> v{21000, 25000, 33000, 47000};
        const auto b = build_rhs(p, x, v);
        CHECK(b.rank() <= 2);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto g = residual(p, x, v[i]);
            const auto col = b.column(i);
            const double scale = norm_inf(g) + 1.0;
            for (std::size_t r = 0; r < g.size(); ++r) CHECK(std::abs(col[r] + g[r]) <= 1e-12 * scale);
        }
    }

    TEST_CASE("rhs at the zero state has rank one") {
        const auto p = model(30, 20);
        const Vector zero(p.n_dof(), 0.0);
        const auto b = truncate(build_rhs(p, zero, std::vector<double>{2e4, 3e4, 4e4}), 10, 1e-12);
        CHECK(b.rank() == 1);
        CHECK_THROWS_AS(build_rhs(p, zero, std::vector<double>{}), InvalidArgument);
    }

    TEST_CASE("apply to zero is zero") {
        const auto p = model(10, 10);
        const Vector x(p.n_dof(), 0.5);
        const auto op = make_subset_operator(p, SubsetShifts{{1.0, 2.0}, {1.0, 2.0}}, x);
        CHECK(apply(op, LowRankFactors(p.n_dof(), 2)).rank() == 0);
        CHECK_THROWS_AS(apply(op, LowRankFactors(p.n_dof(), 3)), DimensionMismatch);
    }

    TEST_CASE("apply on a single column is a matrix-vector product") {
        const auto p = model(12, 8);
        std::mt19937_64 rng(32);
        const auto x = oracle::random_vector(p.n_dof(), rng);
        const auto op = make_subset_operator(p, SubsetShifts{{31000.0}, {31000.0}}, x);
        const LowRankFactors s(oracle::random_dense(p.n_dof(), 1, rng), DenseMatrix(1, 1, 1.0));
        const auto y = apply(op, s).to_dense();
        const auto ref = spmv(jacobian(p, x, 31000.0), s.column(0));
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(y(i, 0) - ref[i]) <= 1e-12 * (1.0 + norm_inf(ref)));
    }

    TEST_CASE("apply matches the dense per-column oracle") {
        std::mt19937_64 rng(33);
        for (auto [nf, ns, m] : {std::tuple{11, 10, 5}, std::tuple{26, 25, 10}, std::tuple{6, 5, 3}}) {
            const auto p = model(nf, ns);
            const auto x = oracle::random_vector(p.n_dof(), rng);
            std::vector<double> mu;
            for (int i = 0; i < m; ++i) mu.push_back(2e4 + 4e3 * i);
            const auto op = make_subset_operator(p, SubsetShifts{mu, mu}, x);
            const LowRankFactors s(oracle::random_dense(p.n_dof(), 2, rng), oracle::random_dense(m, 2, rng));
            const DenseMatrix got = apply(op, s).to_dense();
            const DenseMatrix ref = dense_apply_oracle(op, s.to_dense());
            CHECK(oracle::max_abs_diff(got, ref) <= 1e-12 * std::max(1.0, oracle::frobenius(ref)));
            CHECK(oracle::max_abs_diff(op.apply_dense(s.to_dense()), ref) <= 1e-12 * std::max(1.0, oracle::frobenius(ref)));
        }
    }
}

TEST_SUITE("preconditioner and spectrum") {
    TEST_CASE("singleton subset preconditioner is the exact system matrix") {
        const auto p = model(20, 20);
        const auto x = median_state(p, 4e4);
        const auto op = make_subset_operator(p, SubsetShifts{{4e4}, {4e4}}, x);
        const std::vector<double> v{4e4};
        const auto pre = mean_preconditioner(op, v);
        CHECK(pre.source() == jacobian(p, x, 4e4));
        const auto est = estimate_spectrum(op, pre, v, 1.1);
        CHECK(est.d == 1.0);
        CHECK(est.c == 0.0);
    }

    TEST_CASE("symmetric shifts anchor at their center") {
        const auto p = model(15, 15);
        const Vector x(p.n_dof(), 0.3);
        const std::vector<double> v{2e4, 3e4, 4e4, 5e4};
        const auto op = make_subset_operator(p, SubsetShifts{v, v}, x);
        CHECK(mean_preconditioner(op, v).source() == op.system_matrix(3.5e4));
        CHECK(mean_preconditioner(op, v, PreconditionerAnchor::Median).source() == op.system_matrix(4e4));
        CHECK_THROWS_AS(mean_preconditioner(op, std::vector<double>{1.0}), DimensionMismatch);
    }

    TEST_CASE("preconditioned spectrum clusters near one on the default preset") {
        const auto p = model(200, 200);
        const auto s = ParameterSet::uniform(2e4, 6e4, 200);
        const auto part = split(s, 8);
        for (std::size_t k : {0u, 4u, 7u}) {
            const auto x = median_state(p, part.median_value(k));
            const auto sub = subset_diag(part, k, p.mu_ref());
            const auto op = make_subset_operator(p, sub, x);
            const auto pre = mean_preconditioner(op, sub.values);
            const auto est = estimate_spectrum(op, pre, sub.values, 1.1);
            CHECK(est.lambda_lo > 0.5);
            CHECK(est.lambda_hi < 1.5);
            CHECK(est.d == doctest::Approx(1.0).epsilon(0.1));
            CHECK(est.c < 1.0);
            CHECK_FALSE(est.krylov);
        }
    }

    TEST_CASE("spectrum estimate is invariant under scaling of the pencil") {
        const auto p = model(30, 30);
        const auto x = median_state(p, 3e4);
        const std::vector<double> v{2e4, 2.5e4, 3e4, 3.5e4};
        const auto conv = assemble_conv(p, x);
        const SylvesterOperator op(p.a0(), p.a1(), conv, p.rho_f(), v);
        const auto base = estimate_spectrum(op, mean_preconditioner(op, v), v, 1.1);
        for (double alpha : {1e-4, 3.0, 1e5}) {
            const SylvesterOperator sc(p.a0().scaled(alpha), p.a1().scaled(alpha), conv.scaled(alpha), p.rho_f(), v);
            const auto est = estimate_spectrum(sc, mean_preconditioner(sc, v), v, 1.1);
            CHECK(est.d == doctest::Approx(base.d).epsilon(1e-10));
            CHECK(est.c == doctest::Approx(base.c).epsilon(1e-8));
        }
    }

    TEST_CASE("krylov path agrees with the dense path") {
        const auto p = model(40, 40);
        const auto x = median_state(p, 3e4);
        const std::vector<double> v{2e4, 2.5e4, 3e4, 3.5e4, 4e4};
        const auto op = make_subset_operator(p, SubsetShifts{v, v}, x);
        const auto pre = mean_preconditioner(op, v);
        const auto dense = estimate_spectrum(op, pre, v, 1.1);
        SpectrumOptions opts;
        opts.dense_threshold = 10;
        const auto krylov = estimate_spectrum(op, pre, v, opts);
        CHECK(krylov.krylov);
        CHECK(krylov.lambda_lo == doctest::Approx(dense.lambda_lo).epsilon(1e-6));
        CHECK(krylov.lambda_hi == doctest::Approx(dense.lambda_hi).epsilon(1e-6));
    }

    TEST_CASE("an indefinite pencil is rejected") {
        // A(mu) = diag(1 - mu): preconditioned at the mean the spectrum straddles zero.
        const SparseMatrix a0 = SparseMatrix::identity(3);
        const SparseMatrix a1 = SparseMatrix::identity(3).scaled(-1.0);
        const std::vector<double> v{0.0, 3.0};
        const SylvesterOperator op(a0, a1, SparseMatrix::zero(3, 3), 1.0, v);
        const Factorization pre(op.system_matrix(2.5));
        CHECK_THROWS_AS(estimate_spectrum(op, pre, v, 1.0), IndefinitePencil);
        CHECK_THROWS_AS(estimate_spectrum(op, pre, v, 0.5), InvalidArgument);
    }
}

TEST_SUITE("chebyshev") {
    TEST_CASE("exact preconditioner converges in one iteration") {
        const auto p = model(25, 25);
        const auto x = median_state(p, 4e4);
        const std::vector<double> v{4e4};
        const auto op = make_subset_operator(p, SubsetShifts{v, v}, x);
        const auto pre = mean_preconditioner(op, v);
        const auto est = estimate_spectrum(op, pre, v, 1.1);
        ChebyshevConfig cfg;
        cfg.d = est.d;
        cfg.c = est.c;
        cfg.residual_tol = 1e-12;
        const auto b = build_rhs(p, x, v);
        const auto r = chebyshev_solve(op, pre, b, cfg);
        CHECK(r.converged);
        CHECK(r.iterations == 1);
        CHECK(r.s_hat.rank() <= cfg.max_rank);
        CHECK(rel_error(r.s_hat.to_dense(), direct_subset_solve(op, b.to_dense())) <= 1e-12);
        // the Jacobian's condition number (~1e8) limits agreement with an unrelated elimination
        CHECK(rel_error(r.s_hat.to_dense(), direct_oracle(op, b.to_dense())) <= 1e-7);
    }

    TEST_CASE("diagonal SPD problem obeys the Chebyshev error bound") {
        const std::size_t n = 30;
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        std::vector<double> d0(n), d1(n);
        for (std::size_t i = 0; i < n; ++i) {
            d0[i] = u(rng);
            d1[i] = 0.2 * u(rng);
        }
        const std::vector<double> v{0.5, 1.0, 2.0, 3.0, 4.0, 5.5};
        const SylvesterOperator op(diagonal(d0), diagonal(d1), SparseMatrix::zero(n, n), 1.0, v);
        const auto pre = mean_preconditioner(op, v);
        const auto est = estimate_spectrum(op, pre, v, 1.0);
        const LowRankFactors b(oracle::random_dense(n, 3, rng), oracle::random_dense(v.size(), 3, rng));
        const DenseMatrix exact = direct_oracle(op, b.to_dense());
        const double sigma = est.d / est.c;
        for (std::size_t j = 1; j <= 20; ++j) {
            ChebyshevConfig cfg;
            cfg.d = est.d;
            cfg.c = est.c;
            cfg.max_rank = v.size();
            cfg.trunc_tol = 0.0;
            cfg.residual_tol = 0.0;
            cfg.max_iter = j;
            const auto r = chebyshev_solve(op, pre, b, cfg);
            REQUIRE(r.iterations == j);
            const double err = rel_error(r.s_hat.to_dense(), exact);
            const double bound = 1.0 / oracle::chebyshev_t(j, sigma);
            CAPTURE(j);
            CHECK(err <= 2.0 * bound + 1e-13);
        }
    }

    TEST_CASE("low-rank solution agrees with the direct solve") {
        const auto p = model(100, 100);
        const auto s = ParameterSet::uniform(2e4, 6e4, 100);
        const auto part = split(s, 4);
        for (std::size_t k : {0u, 3u}) {
            const auto x = median_state(p, part.median_value(k));
            const auto sub = subset_diag(part, k, p.mu_ref());
            const auto op = make_subset_operator(p, sub, x);
            const auto b = build_rhs(p, x, sub.values);
            const DenseMatrix exact = direct_subset_solve(op, b.to_dense());
            CHECK(rel_error(exact, direct_oracle(op, b.to_dense())) <= 1e-10);
            const auto sv = singular_values(exact);
            std::size_t numerical_rank = 0;
            while (numerical_rank < sv.size() && sv[numerical_rank] > 1e-12 * sv[0]) ++numerical_rank;
            const auto pre = mean_preconditioner(op, sub.values);
            const auto est = estimate_spectrum(op, pre, sub.values, 1.1);
            ChebyshevConfig cfg;
            cfg.d = est.d;
            cfg.c = est.c;
            cfg.max_rank = std::max<std::size_t>(numerical_rank, 1);
            cfg.trunc_tol = 1e-12;
            const auto r = chebyshev_solve(op, pre, b, cfg);
            CHECK(r.converged);
            CHECK(rel_error(r.s_hat.to_dense(), exact) <= 1e-6);
            // residual keeps falling after burn-in
            for (std::size_t j = 0; j + 5 < r.residual_history.size(); ++j)
                CHECK(r.residual_history[j + 5] < r.residual_history[j]);
        }
    }

    TEST_CASE("a wrong interval is detected as divergence") {
        const std::size_t n = 10;
        std::vector<double> d0(n);
        for (std::size_t i = 0; i < n; ++i) d0[i] = 1.0 + 3.0 * static_cast<double>(i) / (n - 1);
        const std::vector<double> v{0.0};
        const SylvesterOperator op(diagonal(d0), SparseMatrix::zero(n, n), SparseMatrix::zero(n, n), 1.0, v);
        // Preconditioning with the identity leaves the spectrum at [1, 4]; Richardson with step 1 diverges.
        const Factorization pre(SparseMatrix::identity(n));
        ChebyshevConfig cfg;
        cfg.d = 1.0;
        cfg.c = 0.0;
        cfg.residual_tol = 0.0;
        const LowRankFactors b(DenseMatrix(n, 1, 1.0), DenseMatrix(1, 1, 1.0));
        try {
            chebyshev_solve(op, pre, b, cfg);
            FAIL("expected Diverged");
        } catch (const Diverged& e) {
            CHECK_FALSE(e.residual_log().empty());
        }
    }

    TEST_CASE("configuration is validated") {
        ChebyshevConfig cfg;
        cfg.c = 1.0;
        cfg.d = 1.0;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
        cfg = ChebyshevConfig{};
        cfg.max_rank = 0;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }
}

TEST_SUITE("subset step") {
    TEST_CASE("homogeneous model gives a zero correction") {
        const auto p = model(20, 20, 0.0);
        const auto part = split(ParameterSet::uniform(2e4, 6e4, 9), 2);
        const Vector zero(p.n_dof(), 0.0);
        const auto step = subset_newton_step(p, part, 0, zero, SubsetStepOptions{});
        CHECK(step.s_hat.rank() == 0);
        CHECK(norm2(step.x_med) == 0.0);
    }

    TEST_CASE("median column does not get worse and the rank budget holds") {
        const auto p = model(200, 200);
        const auto s = ParameterSet::uniform(2e4, 6e4, 200);
        const auto part = split(s, 8);
        SubsetStepOptions opts;
        opts.cheb.max_rank = 9;
        for (std::size_t k = 0; k < part.num_subsets(); ++k) {
            const double mu = part.median_value(k);
            const auto x = median_state(p, mu);
            const auto step = subset_newton_step(p, part, k, x, opts);
            CHECK(step.s_hat.rank() <= 9);
            auto col = x;
            axpy(1.0, step.s_hat.column(part.median_local_index(k) - 1), col);
            CHECK(relative_residual(p, col, mu) <= relative_residual(p, x, mu));
        }
    }

    TEST_CASE("non-finite median state is rejected") {
        const auto p = model(10, 10);
        const auto part = split(ParameterSet::uniform(2e4, 6e4, 4), 1);
        Vector x(p.n_dof(), 0.0);
        x[2] = INFINITY;
        CHECK_THROWS_AS(subset_newton_step(p, part, 0, x, SubsetStepOptions{}), NonFinite);
    }
}
