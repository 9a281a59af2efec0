#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quiverforge/charvar.hpp"
#include "quiverforge/moment_flow.hpp"
#include "test_helpers.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace quiverforge;
using namespace quiverforge::testing;

TEST_CASE("inner product: positivity, example value, unitary invariance") {
    std::mt19937_64 rng(1);
    QuiverPtr jq = share(jordan_quiver());

    Representation a = jordan_rep(random_matrix(rng, 3, 3));
    CHECK(inner_product(a, a).real() > 0.0);
    CHECK(inner_product(a, a).imag() == doctest::Approx(0.0));
    Representation zero = Representation::zero(jq, {3});
    CHECK(inner_product(zero, zero) == Complex(0.0, 0.0));

    Representation one = jordan_rep(Mat::Constant(1, 1, Complex(1, 0)));
    Representation i_rep = jordan_rep(Mat::Constant(1, 1, Complex(0, 1)));
    CHECK(inner_product(one, i_rep) == Complex(0, -1));  // Tr(1 * conj(i))

    for (int trial = 0; trial < 10; ++trial) {
        Representation x = jordan_rep(random_matrix(rng, 3, 3));
        Representation y = jordan_rep(random_matrix(rng, 3, 3));
        std::vector<Mat> u = {random_unitary(rng, 3)};
        Complex before = inner_product(x, y);
        Complex after = inner_product(apply_group_action(x, u), apply_group_action(y, u));
        CHECK(std::abs(before - after) <= 1e-12 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("bracket: normal matrices, Kronecker scalars, Hermitian tracelessness") {
    std::mt19937_64 rng(2);
    Representation normal = jordan_rep(random_normal_matrix(rng, 4));
    CHECK(max_residual_norm(bracket(normal).per_vertex) <= 1e-12);

    Eigen::VectorXcd z(3);
    z << Complex(0.5, 0.5), Complex(1, -1), Complex(0, 2);
    Representation kr = kronecker_rep(z);
    Bracket b = bracket(kr);
    double norm_sq = z.squaredNorm();  // scalar oracle
    CHECK(b.per_vertex[0](0, 0).real() == doctest::Approx(-norm_sq));
    CHECK(b.per_vertex[1](0, 0).real() == doctest::Approx(norm_sq));

    for (int trial = 0; trial < 15; ++trial) {
        QuiverPtr q = share(random_quiver(rng, 4, 5));
        Representation rep = random_representation(rng, q);
        Bracket br = bracket(rep);
        Complex total = 0.0;
        for (const Mat& m : br.per_vertex) {
            CHECK((m - m.adjoint()).norm() <= 1e-12 * std::max(1.0, m.norm()));
            total += m.trace();
        }
        CHECK(std::abs(total) <= 1e-10 * std::max(1.0, rep.norm() * rep.norm()));
    }
}

TEST_CASE("bracket of a tensor is the Kronecker sum of the factor brackets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        QuiverPtr q1 = share(random_quiver(rng, 3, 4));
        QuiverPtr q2 = share(random_quiver(rng, 3, 4));
        Representation a = random_representation(rng, q1);
        Representation b = random_representation(rng, q2);
        TensorRepresentation t = tensor(a, b);
        Bracket ba = bracket(a), bb = bracket(b), bt = bracket(t.rep);
        int n2 = q2->num_vertices();
        for (int i = 0; i < q1->num_vertices(); ++i)
            for (int j = 0; j < n2; ++j) {
                Mat expected =
                    Eigen::kroneckerProduct(ba.per_vertex[i],
                                            Mat::Identity(b.dim(j), b.dim(j))) +
                    Eigen::kroneckerProduct(Mat::Identity(a.dim(i), a.dim(i)),
                                            bb.per_vertex[j]);
                CHECK((bt.per_vertex[i * n2 + j] - expected).cwiseAbs().maxCoeff() <= 1e-12);
            }
    }
}

TEST_CASE("vortex residual: zero cases, kappa convention, trace identity") {
    std::mt19937_64 rng(4);
    Representation normal = jordan_rep(random_normal_matrix(rng, 3));
    CHECK(max_residual_norm(vortex_residual(normal, {0.0})) <= 1e-12);

    Eigen::VectorXcd z(3);
    z << Complex(1, 0), Complex(0, 0), Complex(0, 0);
    Representation kr = kronecker_rep(z);  // ||z|| = 1
    CHECK(max_residual_norm(vortex_residual(kr, {1.0, -1.0}, -1)) <= 1e-14);

    for (int trial = 0; trial < 10; ++trial) {
        QuiverPtr q = share(kronecker_quiver(2));
        Representation rep = random_representation(rng, q, 2);
        DimensionVector d = rep.dims();
        std::vector<double> theta = balance_theta({1.3, -0.4}, d);
        for (int kappa : {-1, 1}) {
            auto res = vortex_residual(rep, theta, kappa);
            Complex total = 0.0;
            for (const Mat& r : res) total += r.trace();
            // sum Tr R_i = -kappa theta'.d = 0 for balanced theta'.
            CHECK(std::abs(total) <= 1e-9 * std::max(1.0, rep.norm() * rep.norm()));
        }
    }
    CHECK_THROWS_AS(vortex_residual(kr, {1.0, 1.0}), PreconditionError);  // unbalanced
}

TEST_CASE("vortex residual of a direct sum is block diagonal in the factor residuals") {
    std::mt19937_64 rng(5);
    Representation a = jordan_rep(random_matrix(rng, 2, 2));
    Representation b = jordan_rep(random_matrix(rng, 3, 3));
    auto res_a = vortex_residual(a, {0.0});
    auto res_b = vortex_residual(b, {0.0});
    auto res_sum = vortex_residual(direct_sum(a, b), {0.0});
    CHECK((res_sum[0].topLeftCorner(2, 2) - res_a[0]).norm() == 0.0);
    CHECK((res_sum[0].bottomRightCorner(3, 3) - res_b[0]).norm() == 0.0);
    CHECK(res_sum[0].topRightCorner(2, 3).norm() == 0.0);
}

TEST_CASE("flow direction at step zero matches the finite-difference gradient") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 8; ++trial) {
        QuiverPtr q = share(random_quiver(rng, 3, 4));
        Representation rep = random_representation(rng, q, 3);
        DimensionVector d = rep.dims();
        std::vector<double> theta(d.size(), 0.0);
        theta[0] = 1.0;
        std::vector<double> tp = balance_theta(theta, d);

        auto energy_at = [&](double eps) {
            auto res = vortex_residual(rep, tp, -1);
            std::vector<Mat> hermitian;
            for (const Mat& r : res) hermitian.push_back(0.5 * (r + r.adjoint()));
            std::vector<Mat> moved;
            for (const Edge& e : rep.quiver()->edges()) {
                Mat exp_h = (-eps * hermitian[e.head]).exp();
                Mat exp_t = (eps * hermitian[e.tail]).exp();
                moved.push_back(exp_h * rep.matrix(e.id) * exp_t);
            }
            Representation m = Representation::make(rep.quiver(), d, std::move(moved));
            double f = 0.0;
            for (const Mat& r : vortex_residual(m, tp, -1)) f += r.squaredNorm();
            return f;
        };

        // Analytic derivative: f'(0) = -4 sum_a ||R_{ha} phi_a - phi_a R_{ta}||^2.
        auto res = vortex_residual(rep, tp, -1);
        double grad = 0.0;
        for (const Edge& e : rep.quiver()->edges())
            grad += (res[e.head] * rep.matrix(e.id) - rep.matrix(e.id) * res[e.tail])
                        .squaredNorm();
        double analytic = -4.0 * grad;
        if (std::abs(analytic) < 1e-8) continue;  // flat direction, skip

        double h = 1e-5;
        double numeric = (energy_at(h) - energy_at(-h)) / (2 * h);
        CHECK(std::abs(numeric - analytic) <= 1e-4 * std::abs(analytic));
    }
}

TEST_CASE("flow on a diagonalizable Jordan matrix balances to a normal matrix") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        Mat a = random_matrix(rng, 4, 4);
        Representation rep = jordan_rep(a);
        auto before = char_poly_invariants(a);

        FlowConfig cfg;
        auto [limit, report] = kempf_ness_flow(rep, {0.0}, cfg);
        REQUIRE(report.status == FlowStatus::converged);
        CHECK(report.residual <= cfg.tol);
        // The limit is normal to tolerance and has the same characteristic
        // polynomial: the flow moves inside the conjugation orbit.
        auto after = char_poly_invariants(limit.matrix(0));
        for (std::size_t k = 0; k < before.size(); ++k)
            CHECK(std::abs(after[k] - before[k]) <=
                  1e-6 * std::max(1.0, std::abs(before[k])));
        CHECK(report.cycle_trace_drift < 1e-6);
    }
}

TEST_CASE("flow sends a nilpotent Jordan block toward zero") {
    Mat block = Mat::Zero(2, 2);
    block(0, 1) = 1.0;
    FlowConfig cfg;
    auto [limit, report] = kempf_ness_flow(jordan_rep(block), {0.0}, cfg);
    // The orbit closure limit is the zero matrix; the flow either converges
    // with a tiny matrix or collapses outright.
    CHECK(limit.norm() < 1e-3);
    CHECK(report.energy_history.front() >= report.energy_history.back());
}

TEST_CASE("flow energy history is nonincreasing") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        QuiverPtr q = share(random_quiver(rng, 3, 4));
        Representation rep = random_representation(rng, q, 3);
        std::vector<double> theta(rep.dims().size(), 0.0);
        auto [limit, report] = kempf_ness_flow(rep, theta, FlowConfig{});
        for (std::size_t k = 0; k + 1 < report.energy_history.size(); ++k)
            CHECK(report.energy_history[k] >= report.energy_history[k + 1] - 1e-12);
    }
}

TEST_CASE("Kronecker flow converges to the unit sphere") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXcd z(3);
        for (int k = 0; k < 3; ++k)
            z(k) = Complex(std::normal_distribution<>()(rng), std::normal_distribution<>()(rng));
        if (z.norm() < 1e-3) continue;
        Representation rep = kronecker_rep(z);
        auto [limit, report] = kempf_ness_flow(rep, {1.0, -1.0}, FlowConfig{}, -1);
        REQUIRE(report.status == FlowStatus::converged);
        Eigen::VectorXcd zz(3);
        for (int e = 0; e < 3; ++e) zz(e) = limit.matrix(e)(0, 0);
        CHECK(zz.squaredNorm() == doctest::Approx(1.0).epsilon(1e-6));
        // Direction is preserved up to the U(1) x U(1) phase: the flow scales
        // z by a positive real factor.
        Eigen::VectorXcd direction = z / z.norm();
        Eigen::VectorXcd limit_dir = zz / zz.norm();
        CHECK((direction - limit_dir).norm() <= 1e-6);
    }
}

TEST_CASE("certify: tensor of two normal Jordan matrices needs zero iterations") {
    std::mt19937_64 rng(10);
    Mat a = random_normal_matrix(rng, 3), b = random_normal_matrix(rng, 2);
    TensorRepresentation t = tensor(jordan_rep(a), jordan_rep(b));
    CertifyResult r = certify_polystable(t.rep, {0.0}, FlowConfig{});
    CHECK(r.verdict == PolystabilityVerdict::polystable);
    CHECK(r.report.iterations == 0);
}

TEST_CASE("certify: zero Kronecker representation is not polystable at (1,-1)") {
    Representation zero = kronecker_rep(Eigen::VectorXcd::Zero(3));
    CertifyResult r = certify_polystable(zero, {1.0, -1.0}, FlowConfig{});
    CHECK(r.verdict == PolystabilityVerdict::not_polystable_evidence);
}

TEST_CASE("certify: nilpotent Jordan block is not polystable as given") {
    Mat block = Mat::Zero(2, 2);
    block(0, 1) = 1.0;
    CertifyResult r = certify_polystable(jordan_rep(block), {0.0}, FlowConfig{});
    CHECK(r.verdict == PolystabilityVerdict::not_polystable_evidence);
    // The flow limit is the zero matrix, whose endomorphism algebra is all of
    // End(C^2); the block's commutant is 2-dimensional.
    CHECK(r.end_dim_input == 2);
    CHECK(r.end_dim_limit == 4);
}

TEST_CASE("certify: diagonalizable matrices at theta = 0 are polystable") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        Mat a = random_matrix(rng, 3, 3);  // generically diagonalizable
        CertifyResult r = certify_polystable(jordan_rep(a), {0.0}, FlowConfig{});
        CHECK(r.verdict == PolystabilityVerdict::polystable);
    }
}

TEST_CASE("unstable Kronecker direction collapses to zero") {
    Eigen::VectorXcd z(2);
    z << Complex(0.2, 0), Complex(0, 0.1);
    // theta' = (-1, 1) makes z != 0 unstable under kappa = -1.
    auto [limit, report] = kempf_ness_flow(kronecker_rep(z), {-1.0, 1.0}, FlowConfig{}, -1);
    CHECK(report.status == FlowStatus::collapsed_to_zero);
    CertifyResult r = certify_polystable(kronecker_rep(z), {-1.0, 1.0}, FlowConfig{});
    CHECK(r.verdict == PolystabilityVerdict::not_polystable_evidence);
}

TEST_CASE("moduli tangent dimension: Kronecker and Jordan oracles") {
    // Kronecker n with ||z|| = 1 solves the vortex equation at (1,-1), kappa=-1.
    for (int n : {2, 3, 4}) {
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
        z(0) = Complex(0.6, 0.0);
        z(n - 1) += Complex(0.0, 0.8);
        Representation rep = kronecker_rep(z / z.norm());
        CHECK(moduli_tangent_dim(rep, {1.0, -1.0}, -1) == 2 * (n - 1));
    }

    Representation j1 = jordan_rep(Mat::Constant(1, 1, Complex(2.0, 1.0)));
    CHECK(moduli_tangent_dim(j1, {0.0}) == 2);

    // Precondition: must be a vortex solution.
    Eigen::VectorXcd big(2);
    big << Complex(5, 0), Complex(0, 0);
    CHECK_THROWS_AS(moduli_tangent_dim(kronecker_rep(big), {1.0, -1.0}, -1),
                    PreconditionError);
}

TEST_CASE("verify_tensor_polystability on normal pairs and flow outputs") {
    std::mt19937_64 rng(12);
    Mat a = random_normal_matrix(rng, 3), b = random_normal_matrix(rng, 2);
    TensorPolystabilityReport r =
        verify_tensor_polystability(jordan_rep(a), {0.0}, jordan_rep(b), {0.0}, 1e-10);
    CHECK(r.precondition_ok);
    CHECK(r.ok);
    CHECK(r.tensor_residual <= 1e-10);

    // Kronecker unit vectors at theta' = (1,-1) each solve the equation; the
    // diamond solves it at the combined parameter.
    Eigen::VectorXcd z(3), w(2);
    z << Complex(1, 0), Complex(0, 0), Complex(0, 0);
    w << Complex(0, 1), Complex(0, 0);
    TensorPolystabilityReport kr = verify_tensor_polystability(
        kronecker_rep(z), {1.0, -1.0}, kronecker_rep(w), {1.0, -1.0}, 1e-10);
    CHECK(kr.precondition_ok);
    CHECK(kr.ok);

    // Flow-converged random pairs satisfy the bound c tol.
    for (int trial = 0; trial < 5; ++trial) {
        Representation x = jordan_rep(random_matrix(rng, 3, 3));
        Representation y = jordan_rep(random_matrix(rng, 2, 2));
        auto [xl, xr] = kempf_ness_flow(x, {0.0}, FlowConfig{});
        auto [yl, yr] = kempf_ness_flow(y, {0.0}, FlowConfig{});
        REQUIRE(xr.status == FlowStatus::converged);
        REQUIRE(yr.status == FlowStatus::converged);
        TensorPolystabilityReport fr =
            verify_tensor_polystability(xl, {0.0}, yl, {0.0}, 1e-8);
        CHECK(fr.precondition_ok);
        CHECK(fr.ok);
    }

    // Precondition violations are reported, not silently passed.
    Eigen::VectorXcd off(2);
    off << Complex(3, 0), Complex(0, 0);
    TensorPolystabilityReport badr = verify_tensor_polystability(
        kronecker_rep(off), {1.0, -1.0}, jordan_rep(a), {0.0}, 1e-10);
    CHECK_FALSE(badr.precondition_ok);
    CHECK_FALSE(badr.ok);
}

TEST_CASE("cycle traces are conserved along flows on cyclic quivers") {
    std::mt19937_64 rng(13);
    auto tq = tensor_quiver(jordan_quiver(), jordan_quiver());
    Mat a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2);
    Representation rep = Representation::make(tq.product, {4}, {
        Eigen::kroneckerProduct(a, Mat::Identity(2, 2)),
        Eigen::kroneckerProduct(Mat::Identity(2, 2), b)});
    auto [limit, report] = kempf_ness_flow(rep, {0.0}, FlowConfig{});
    CHECK(report.cycle_trace_drift < 1e-6);
}
