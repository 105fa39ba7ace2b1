// Copyright 2026 The holoflux authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "holoflux/group.hpp"

using namespace holoflux;

namespace {

/// Matrix exponential by plain power series, the independent oracle for the
/// closed-form SU(2) exponential.
Eigen::Matrix2cd series_exp(const Eigen::Matrix2cd &x) {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
    for (int k = 1; k < 40; ++k) {
        term = term * x / double(k);
        acc += term;
    }
    return acc;
}

Eigen::Matrix2cd tau_matrix(int a) {
    Eigen::Matrix2cd s;
    const cx i(0.0, 1.0);
    if (a == 0)
        s << 0, 1, 1, 0;
    else if (a == 1)
        s << 0, -i, i, 0;
    else
        s << 1, 0, 0, -1;
    return cx(0.0, -0.5) * s;
}

} // namespace

TEST_SUITE_BEGIN("group");

TEST_CASE("finite group tables: identity law and S3 conjugation oracle") {
    for (const char *name : {"finite:Z2", "finite:Z4", "finite:S3", "finite:Q8"}) {
        auto be = make_backend(name);
        Rng rng(7);
        for (int i = 0; i < 20; ++i) {
            GroupElem g = be->random_element(rng);
            CHECK(be->approx_equal(be->multiply(be->identity(), g), g));
            CHECK(be->approx_equal(be->multiply(g, be->invert(g)), be->identity()));
        }
    }
    auto s3 = FiniteBackend::make_group("S3");
    // conjugate(s, r) = s r s^-1 = r^2, checked against the raw table
    GroupElem s = s3->parse_element("s");
    GroupElem r = s3->parse_element("r");
    GroupElem expected = s3->parse_element("r2");
    CHECK(s3->approx_equal(s3->conjugate(s, r), expected));
    int direct = s3->mul_index(s3->mul_index(s.index(), r.index()), s3->inv_index(s.index()));
    CHECK(direct == expected.index());
}

TEST_CASE("group associativity on 200 random triples") {
    for (const char *name : {"finite:S3", "finite:Q8", "u1:modes=4", "su2:cutoff=1"}) {
        auto be = make_backend(name);
        Rng rng(11);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            GroupElem a = be->random_element(rng);
            GroupElem b = be->random_element(rng);
            GroupElem c = be->random_element(rng);
            worst = std::max(worst, be->distance(be->multiply(be->multiply(a, b), c),
                                                 be->multiply(a, be->multiply(b, c))));
        }
        CHECK(worst <= (be->is_lie() ? 1e-12 : 0.0));
    }
}

TEST_CASE("su2 exp/log/sqrt against series and inverse oracles") {
    auto be = make_backend("su2:cutoff=1");
    // exp(pi tau3) = diag(e^{-i pi/2}, e^{i pi/2}), via the power series oracle
    Eigen::VectorXd x(3);
    x << 0, 0, kPi;
    GroupElem g = be->exp(be->alg(x));
    Eigen::Matrix2cd oracle = series_exp(kPi * tau_matrix(2));
    CHECK((g.matrix() - oracle).norm() <= 1e-12);
    Eigen::Matrix2cd expected;
    expected << std::exp(cx(0, -kPi / 2)), 0, 0, std::exp(cx(0, kPi / 2));
    CHECK((g.matrix() - expected).norm() <= 1e-12);

    // invert(exp(pi/2 tau3)) = exp(-pi/2 tau3), matrix inverse oracle
    Eigen::VectorXd y(3);
    y << 0, 0, kPi / 2;
    GroupElem h = be->exp(be->alg(y));
    Eigen::VectorXd ym = -y;
    CHECK(be->approx_equal(be->invert(h), be->exp(be->alg(ym)), 1e-12));
    CHECK((be->invert(h).matrix() - h.matrix().inverse()).norm() <= 1e-12);

    // exp(0) = identity
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    CHECK(be->approx_equal(be->exp(be->alg(z)), be->identity()));

    Rng rng(3);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        GroupElem u = be->random_element(rng);
        if (std::abs(u.matrix().trace().real() + 2.0) < 1e-6) continue;
        worst = std::max(worst, be->distance(be->exp(be->log(u)), u));
        GroupElem su = be->sqrt(u);
        worst = std::max(worst, be->distance(be->multiply(su, su), u));
        CHECK(be->log(u).x.norm() < 2.0 * kPi); // principal branch
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("u1 exp/log/sqrt: abelian half-angle") {
    auto u1 = dynamic_cast<const U1Backend *>(make_backend("u1:modes=4").release());
    std::unique_ptr<const U1Backend> owner(u1);
    GroupElem g = u1->make(1.0);
    CHECK(u1->log(g).x(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u1->sqrt(g).angle() == doctest::Approx(0.5).epsilon(1e-14));
    // principal branch below the cut
    CHECK(u1->log(u1->make(5.0)).x(0) == doctest::Approx(5.0 - 2 * kPi).epsilon(1e-12));
    CHECK_THROWS_AS((void)u1->log(u1->make(kPi)), DomainError);
}

TEST_CASE("su2 cut locus raises a domain error") {
    auto be = make_backend("su2:cutoff=1");
    Eigen::VectorXd x(3);
    x << 0, 0, 2.0 * kPi; // exp = -1, trace -2
    GroupElem g = be->exp(be->alg(x));
    CHECK_THROWS_AS((void)be->log(g), DomainError);
}

TEST_CASE("finite backends refuse algebra operations") {
    auto be = make_backend("finite:S3");
    CHECK(be->alg_dim() == 0);
    Eigen::VectorXd x(0);
    CHECK_THROWS_AS((void)be->exp(be->alg(x)), Unsupported);
    CHECK_THROWS_AS((void)be->bracket(be->alg(x), be->alg(x)), Unsupported);
}

TEST_CASE("backend mismatch is rejected") {
    auto a = make_backend("finite:S3");
    auto b = make_backend("finite:Q8");
    CHECK_THROWS_AS((void)a->multiply(a->identity(), b->identity()), BackendMismatch);
}

TEST_CASE("adjoint action: rotation oracle and CoAd homomorphism") {
    auto be = make_backend("su2:cutoff=1");
    // Ad(identity) X = X
    Eigen::VectorXd v(3);
    v << 0.3, -0.7, 0.2;
    CHECK((be->ad(be->identity(), be->alg(v)).x - v).norm() <= 1e-14);
    // Ad(exp(t tau3)) tau1 = cos t tau1 + sin t tau2, conjugation oracle
    const double t = 0.8341;
    Eigen::VectorXd z(3);
    z << 0, 0, t;
    GroupElem g = be->exp(be->alg(z));
    AlgElem moved = be->ad(g, be->alg_basis(0));
    Eigen::Matrix2cd direct = g.matrix() * tau_matrix(0) * g.matrix().adjoint();
    Eigen::Matrix2cd recon = moved.x(0) * tau_matrix(0) + moved.x(1) * tau_matrix(1) +
                             moved.x(2) * tau_matrix(2);
    CHECK((direct - recon).norm() <= 1e-12);
    CHECK(moved.x(0) == doctest::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(moved.x(1) == doctest::Approx(std::sin(t)).epsilon(1e-12));
    CHECK(moved.x(2) == doctest::Approx(0.0).epsilon(1e-12));

    // CoAd(gh) = CoAd(g) CoAd(h) over 100 samples
    Rng rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        GroupElem a = be->random_element(rng);
        GroupElem b = be->random_element(rng);
        Eigen::VectorXd th(3);
        th << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
        CoAlgElem lhs = be->coad(be->multiply(a, b), be->coalg(th));
        CoAlgElem rhs = be->coad(a, be->coad(b, be->coalg(th)));
        worst = std::max(worst, (lhs.theta - rhs.theta).norm());
    }
    CHECK(worst <= 1e-12);

    // pairing convention <CoAd(g) theta, X> = <theta, Ad(g^-1) X>
    GroupElem a = be->random_element(rng);
    Eigen::VectorXd th(3), xx(3);
    th << 0.2, -1.1, 0.5;
    xx << -0.4, 0.9, 1.3;
    CHECK(pairing(be->coad(a, be->coalg(th)), be->alg(xx)) ==
          doctest::Approx(pairing(be->coalg(th), be->ad(be->invert(a), be->alg(xx))))
              .epsilon(1e-12));
}

TEST_CASE("bracket: commutator oracle and Jacobi identity") {
    auto be = make_backend("su2:cutoff=1");
    // bracket(tau1, tau2) = tau3, against the matrix commutator of -i sigma/2
    AlgElem z = be->bracket(be->alg_basis(0), be->alg_basis(1));
    Eigen::Matrix2cd comm = tau_matrix(0) * tau_matrix(1) - tau_matrix(1) * tau_matrix(0);
    CHECK((comm - tau_matrix(2)).norm() <= 1e-15);
    CHECK((z.x - Eigen::Vector3d(0, 0, 1)).norm() <= 1e-14);

    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd a(3), b(3), c(3);
        for (int k = 0; k < 3; ++k) {
            a(k) = rng.uniform(-1, 1);
            b(k) = rng.uniform(-1, 1);
            c(k) = rng.uniform(-1, 1);
        }
        AlgElem j1 = be->bracket(be->alg(a), be->bracket(be->alg(b), be->alg(c)));
        AlgElem j2 = be->bracket(be->alg(b), be->bracket(be->alg(c), be->alg(a)));
        AlgElem j3 = be->bracket(be->alg(c), be->bracket(be->alg(a), be->alg(b)));
        CHECK((j1.x + j2.x + j3.x).norm() <= 1e-12);
        // antisymmetry
        CHECK((be->bracket(be->alg(a), be->alg(b)).x + be->bracket(be->alg(b), be->alg(a)).x)
                  .norm() <= 1e-12);
    }
}

TEST_CASE("haar integration: normalization, orthogonality, sign-character oracle") {
    for (const char *name : {"finite:Z2", "finite:S3", "finite:Q8", "u1:modes=4", "su2:cutoff=1"}) {
        auto be = make_backend(name);
        cx one = be->haar_integrate([](const GroupElem &) { return cx(1.0); }, 2);
        CHECK(std::abs(one - cx(1.0)) <= 1e-14);
    }
    auto u1 = make_backend("u1:modes=8");
    cx k3 = u1->haar_integrate(
        [&](const GroupElem &g) { return std::exp(cx(0.0, 3.0 * g.angle())); }, 3);
    CHECK(std::abs(k3) <= 1e-14);

    // S3 sign character sums to zero; oracle is the explicit 6-element sum
    auto s3 = FiniteBackend::make_group("S3");
    cx direct(0.0);
    for (int i = 0; i < 6; ++i)
        direct += s3->irrep_matrix(1, s3->element(i))(0, 0) / 6.0;
    cx viaquad = s3->haar_integrate(
        [&](const GroupElem &g) { return s3->irrep_matrix(1, g)(0, 0); }, 0);
    CHECK(std::abs(direct) <= 1e-15);
    CHECK(std::abs(viaquad - direct) <= 1e-15);
}

TEST_CASE("irreps: homomorphism, unitarity, defining matrices") {
    for (const char *name : {"finite:Z2", "finite:Z4", "finite:S3", "finite:Q8", "u1:modes=3",
                             "su2:cutoff=3/2"}) {
        auto be = make_backend(name);
        Rng rng(13);
        for (int label : be->irrep_labels()) {
            for (int i = 0; i < 10; ++i) {
                GroupElem g = be->random_element(rng);
                GroupElem h = be->random_element(rng);
                Eigen::MatrixXcd pg = be->irrep_matrix(label, g);
                CHECK((pg.adjoint() * pg -
                       Eigen::MatrixXcd::Identity(pg.rows(), pg.cols()))
                          .norm() <= 1e-12);
                CHECK((be->irrep_matrix(label, be->multiply(g, h)) -
                       pg * be->irrep_matrix(label, h))
                          .norm() <= 1e-12);
            }
        }
    }
    // trivial irrep is [1]; U(1) mode 2 at angle phi is e^{2 i phi};
    // SU(2) spin 1/2 is the defining matrix
    auto u1 = make_backend("u1:modes=3");
    GroupElem g = u1->parse_element("angle:0.7");
    CHECK(std::abs(u1->irrep_matrix(0, g)(0, 0) - cx(1.0)) <= 1e-15);
    CHECK(std::abs(u1->irrep_matrix(2, g)(0, 0) - std::exp(cx(0, 1.4))) <= 1e-14);
    auto su2 = make_backend("su2:cutoff=1");
    Rng rng(17);
    GroupElem u = su2->random_element(rng);
    CHECK((su2->irrep_matrix(1, u) - u.matrix()).norm() <= 1e-13);
    CHECK(std::abs(su2->irrep_matrix(0, u)(0, 0) - cx(1.0)) <= 1e-15);
}

TEST_CASE("Schur orthogonality under haar_integrate") {
    for (const char *name : {"finite:S3", "finite:Q8", "u1:modes=2", "su2:cutoff=1"}) {
        auto be = make_backend(name);
        auto labels = be->irrep_labels();
        double worst = 0.0;
        for (int la : labels)
            for (int lb : labels) {
                const int da = be->irrep_dim(la), db = be->irrep_dim(lb);
                for (int a = 0; a < da; ++a)
                    for (int b = 0; b < da; ++b)
                        for (int c = 0; c < db; ++c)
                            for (int d = 0; d < db; ++d) {
                                cx val = be->haar_integrate(
                                    [&](const GroupElem &g) {
                                        return be->irrep_matrix(la, g)(a, b) *
                                               std::conj(be->irrep_matrix(lb, g)(c, d));
                                    },
                                    be->band_of_label(la) + be->band_of_label(lb));
                                cx expect =
                                    (la == lb && a == c && b == d) ? cx(1.0 / da) : cx(0.0);
                                worst = std::max(worst, std::abs(val - expect));
                            }
            }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("su2 irrep generators match finite differences of the flow") {
    auto be = make_backend("su2:cutoff=2");
    const double step = 1e-5;
    for (int label : {1, 2, 3, 4}) {
        for (int a = 0; a < 3; ++a) {
            Eigen::VectorXd xp = Eigen::VectorXd::Zero(3), xm = Eigen::VectorXd::Zero(3);
            xp(a) = step;
            xm(a) = -step;
            Eigen::MatrixXcd fd = (be->irrep_matrix(label, be->exp(be->alg(xp))) -
                                   be->irrep_matrix(label, be->exp(be->alg(xm)))) /
                                  (2.0 * step);
            CHECK((fd - be->irrep_generator(label, a)).norm() <= 1e-6);
        }
    }
}

TEST_CASE("backend selector strings") {
    CHECK(make_backend("finite:S3")->name() == "finite:S3");
    CHECK(make_backend("u1:modes=8")->name() == "u1:modes=8");
    CHECK(make_backend("su2:cutoff=1")->name() == "su2:cutoff=1");
    CHECK(make_backend("su2:cutoff=3/2")->name() == "su2:cutoff=3/2");
    CHECK(make_backend("su2:cutoff=3/2")->cutoff_band() == 3);
    CHECK_THROWS_AS((void)make_backend("su3:whatever"), ValidationError);
    CHECK_THROWS_AS((void)make_backend("finite:A5"), ValidationError);
}

TEST_SUITE_END();
