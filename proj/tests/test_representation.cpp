#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quiverforge/representation.hpp"
#include "quiverforge/tensor_rep.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace quiverforge;
using namespace quiverforge::testing;

TEST_CASE("evaluate_path: trivial, loop powers, chains") {
    std::mt19937_64 rng(1);
    QuiverPtr jq = share(jordan_quiver());
    Mat a = random_matrix(rng, 3, 3);
    Representation rep = Representation::make(jq, {3}, {a});

    CHECK(evaluate_path(rep, Path::trivial(jq, 0)).isApprox(Mat::Identity(3, 3)));
    CHECK(evaluate_path(rep, Path::from_edges(jq, {0, 0})).isApprox(a * a));

    QuiverPtr a3 = share(type_a_quiver(3));
    Mat m0 = random_matrix(rng, 2, 3), m1 = random_matrix(rng, 3, 4);
    Representation chain = Representation::make(a3, {2, 3, 4}, {m0, m1});
    CHECK(evaluate_path(chain, Path::from_edges(a3, {0, 1})).isApprox(m0 * m1));
}

TEST_CASE("evaluate_path is multiplicative over composition") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        QuiverPtr q = share(random_quiver(rng, 3, 4));
        Representation rep = random_representation(rng, q);
        for (int u = 0; u < q->num_vertices(); ++u)
            for (int v = 0; v < q->num_vertices(); ++v) {
                auto ps = enumerate_paths(q, u, v, 2);
                for (int w = 0; w < q->num_vertices(); ++w) {
                    auto qs = enumerate_paths(q, v, w, 2);
                    for (const Path& later : ps)
                        for (const Path& earlier : qs) {
                            if (later.tail() != earlier.head()) continue;
                            Path combined = later.composed_with(earlier);
                            Mat lhs = evaluate_path(rep, combined);
                            Mat rhs = evaluate_path(rep, later) * evaluate_path(rep, earlier);
                            CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
                        }
                }
            }
    }
}

TEST_CASE("satisfies_relations on the commutator relation") {
    auto tq = tensor_quiver(jordan_quiver(), jordan_quiver());
    CommutationIdeal ideal = commutation_generators(tq);

    Mat d1 = Mat::Zero(2, 2), d2 = Mat::Zero(2, 2);
    d1.diagonal() << Complex(1, 0), Complex(2, 0);
    d2.diagonal() << Complex(-1, 0), Complex(3, 0);
    Representation commuting = Representation::make(tq.product, {2}, {d1, d2});
    RelationCheck ok = satisfies_relations(commuting, ideal.relations, 1e-12);
    CHECK(ok.ok);
    CHECK(ok.residuals[0] == 0.0);

    Mat a(2, 2), b(2, 2);
    a << 0, 1, 0, 0;
    b << 1, 0, 0, 2;
    Representation noncommuting = Representation::make(tq.product, {2}, {a, b});
    RelationCheck bad = satisfies_relations(noncommuting, ideal.relations, 1e-10);
    CHECK_FALSE(bad.ok);
    CHECK(bad.residuals[0] == doctest::Approx((a * b - b * a).norm()));

    CHECK(satisfies_relations(noncommuting, {}, 1e-10).ok);  // empty list
}

TEST_CASE("relation residual is preserved under unitary group action") {
    std::mt19937_64 rng(4);
    auto tq = tensor_quiver(jordan_quiver(), jordan_quiver());
    CommutationIdeal ideal = commutation_generators(tq);
    for (int trial = 0; trial < 10; ++trial) {
        Mat a = random_matrix(rng, 3, 3);
        Mat b = random_matrix(rng, 3, 3);
        Representation rep = Representation::make(tq.product, {3}, {a, b});
        double res0 = satisfies_relations(rep, ideal.relations, 1e-8).residuals[0];
        Representation moved = apply_group_action(rep, {random_unitary(rng, 3)});
        double res1 = satisfies_relations(moved, ideal.relations, 1e-8).residuals[0];
        CHECK(res1 == doctest::Approx(res0).epsilon(1e-9));
    }
}

TEST_CASE("slope matches the named examples") {
    CHECK(slope({0, 1}, {1.0, -1.0}) == -1.0);
    CHECK(slope({3, 5}, {0.0, 0.0}) == 0.0);
    CHECK(slope({1, 1}, {1.0, -1.0}) == 0.0);
    CHECK_THROWS_AS(slope({0, 0}, {1.0, 1.0}), PreconditionError);
}

TEST_CASE("balance_theta on the named examples") {
    CHECK(balance_theta({1.0, 0.0}, {1, 1}) == std::vector<double>{1.0, -1.0});
    CHECK(balance_theta({3.0, 3.0, 3.0}, {1, 2, 5}) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(balance_theta({-1.0, 0.0, 0.0, 1.0}, {1, 1, 1, 1}) ==
          std::vector<double>{-4.0, 0.0, 0.0, 4.0});
}

TEST_CASE("balanced theta is exactly orthogonal to the dimension vector") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> theta_int(-20, 20);
    std::uniform_int_distribution<int> dim(0, 7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5);
        std::vector<Rational> theta(n);
        DimensionVector d(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            theta[i] = Rational(theta_int(rng), 1 + static_cast<int>(rng() % 7));
            d[i] = dim(rng);
            nonzero |= d[i] > 0;
        }
        if (!nonzero) d[0] = 1;
        std::vector<Rational> balanced = balance_theta_exact(theta, d);
        Rational dot = 0;
        for (int i = 0; i < n; ++i) dot += balanced[i] * d[i];
        CHECK(dot == 0);
    }
    // Integer theta balances exactly in doubles as well.
    std::vector<double> bal = balance_theta({2.0, -3.0, 5.0}, {2, 1, 3});
    CHECK(2 * bal[0] + bal[1] + 3 * bal[2] == 0.0);
}

TEST_CASE("direct sums and slopes") {
    QuiverPtr jq = share(jordan_quiver());
    Representation one = Representation::make(jq, {1}, {Mat::Constant(1, 1, 1.0)});
    Representation two = Representation::make(jq, {1}, {Mat::Constant(1, 1, 2.0)});
    Representation sum = direct_sum(one, two);
    CHECK(sum.dims() == DimensionVector{2});
    CHECK(sum.matrix(0)(0, 0) == Complex(1.0, 0.0));
    CHECK(sum.matrix(0)(1, 1) == Complex(2.0, 0.0));
    CHECK(sum.matrix(0)(0, 1) == Complex(0.0, 0.0));

    Representation zero = Representation::zero(jq, {2});
    Representation padded = direct_sum(one, zero);
    CHECK(padded.dims() == DimensionVector{3});
    CHECK(padded.matrix(0).topLeftCorner(1, 1).isApprox(one.matrix(0)));

    // Slope is invariant under doubling the dimension vector.
    CHECK(slope({3}, {0.7}) == doctest::Approx(slope({6}, {0.7})));
}

TEST_CASE("subrepresentation checks on the Kronecker quiver") {
    Eigen::VectorXcd z(2);
    z << Complex(1, 0), Complex(0.5, -0.5);
    Representation rep = kronecker_rep(z);

    SubspaceFamily full{{Mat::Identity(1, 1), Mat::Identity(1, 1)}};
    CHECK(is_subrepresentation(rep, full, 1e-10));

    SubspaceFamily zero{{Mat(1, 0), Mat(1, 0)}};
    CHECK(is_subrepresentation(rep, zero, 1e-10));

    SubspaceFamily tail_only{{Mat::Identity(1, 1), Mat(1, 0)}};
    CHECK_FALSE(is_subrepresentation(rep, tail_only, 1e-10));

    SubspaceFamily head_only{{Mat(1, 0), Mat::Identity(1, 1)}};
    CHECK(is_subrepresentation(rep, head_only, 1e-10));
}

TEST_CASE("images of intertwiners are subrepresentations") {
    std::mt19937_64 rng(7);
    QuiverPtr a2 = share(type_a_quiver(2));
    for (int trial = 0; trial < 15; ++trial) {
        Mat phi = random_matrix(rng, 3, 3);
        Representation y = Representation::make(a2, {3, 3}, {phi});
        // The family (col(phi g), col(g)) is the image of the intertwiner
        // (phi g, g): phi maps col(g) into col(phi g).
        Mat g = random_matrix(rng, 3, 2);
        Mat g0 = phi * g;
        Eigen::JacobiSVD<Mat> svd0(g0, Eigen::ComputeThinU);
        Eigen::JacobiSVD<Mat> svd1(g, Eigen::ComputeThinU);
        auto rank_of = [](const Eigen::JacobiSVD<Mat>& svd) {
            int r = 0;
            for (int k = 0; k < svd.singularValues().size(); ++k)
                if (svd.singularValues()(k) > 1e-9) ++r;
            return r;
        };
        SubspaceFamily image{{svd0.matrixU().leftCols(rank_of(svd0)),
                              svd1.matrixU().leftCols(rank_of(svd1))}};
        CHECK(is_subrepresentation(y, image, 1e-8));
    }
}

TEST_CASE("thin stability reproduces the projective-space example") {
    Eigen::VectorXcd z(3);
    z << Complex(0.3, 0.1), Complex(-1, 0.4), Complex(2, 0);
    Representation nonzero = kronecker_rep(z);
    StabilityData s = make_stability({1.0, -1.0}, nonzero.dims());

    CHECK(thin_stability(nonzero, s).verdict == ThinVerdict::stable);

    Representation zero = kronecker_rep(Eigen::VectorXcd::Zero(3));
    ThinStabilityResult unstable = thin_stability(zero, s);
    CHECK(unstable.verdict == ThinVerdict::unstable);
    CHECK(unstable.witness == std::vector<int>{0});  // the tail vertex

    StabilityData flat = make_stability({0.0, 0.0}, nonzero.dims());
    CHECK(thin_stability(nonzero, flat).verdict == ThinVerdict::semistable_not_stable);
}

TEST_CASE("thin stability is invariant under theta translation") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> beta(-5.0, 5.0);
    Eigen::VectorXcd z(3);
    z << Complex(1, 0), Complex(0, 0), Complex(0.5, 0.5);
    Representation rep = kronecker_rep(z);
    for (double theta1 : {1.0, -1.0, 0.0, 2.5}) {
        StabilityData base = make_stability({theta1, -theta1}, rep.dims());
        ThinVerdict reference = thin_stability(rep, base).verdict;
        for (int trial = 0; trial < 20; ++trial) {
            double b = beta(rng);
            StabilityData moved = make_stability({theta1 + b, -theta1 + b}, rep.dims());
            CHECK(thin_stability(rep, moved).verdict == reference);
        }
    }
}

TEST_CASE("thin stability rejects non-thin input and empty support") {
    QuiverPtr jq = share(jordan_quiver());
    Representation fat = Representation::make(jq, {2}, {Mat::Zero(2, 2)});
    CHECK_THROWS_AS(thin_stability(fat, make_stability({0.0}, {2})), PreconditionError);

    Representation empty = Representation::zero(jq, {0});
    CHECK_THROWS_AS(thin_stability(empty, make_stability({0.0}, {0})), PreconditionError);
}

TEST_CASE("representation construction validates shapes") {
    QuiverPtr jq = share(jordan_quiver());
    CHECK_THROWS_AS(Representation::make(jq, {2}, {Mat::Zero(2, 3)}), PreconditionError);
    CHECK_THROWS_AS(Representation::make(jq, {2}, {}), PreconditionError);
    Mat bad = Mat::Zero(1, 1);
    bad(0, 0) = Complex(std::numeric_limits<double>::infinity(), 0);
    CHECK_THROWS_AS(Representation::make(jq, {1}, {bad}), PreconditionError);
}
