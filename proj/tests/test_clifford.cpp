#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spincoh/clifford.hpp"
#include "spincoh/fierz.hpp"

using namespace spincoh;

TEST_CASE("even rep at m=1 matches the defining formulas") {
    SpinRep rep = SpinRep::even(1);
    MultiVector one = MultiVector::scalar(1, Qi(1));
    MultiVector e1 = MultiVector::basis_letters(1, {1});
    CHECK(rep.apply_gamma(1, one) == e1);
    CHECK(rep.apply_gamma(2, one) == -Qi::i() * e1);
    // Gamma1 Gamma2 + Gamma2 Gamma1 = 0
    MultiVector x = rep.apply_gamma(1, rep.apply_gamma(2, e1)) +
                    rep.apply_gamma(2, rep.apply_gamma(1, e1));
    CHECK(x.is_zero());
}

TEST_CASE("clifford relations and hermiticity, n = 2..14") {
    for (int m = 1; m <= 7; ++m) {
        SpinRep rep = SpinRep::even(m);
        CHECK(rep.clifford_relations_hold());
        CHECK(rep.gammas_hermitian());
    }
}

TEST_CASE("gamma squared is the identity") {
    SpinRep rep = SpinRep::even(3);
    for (int mu = 1; mu <= 6; ++mu) {
        MonoEndo g2 = rep.gamma(mu).compose(rep.gamma(mu));
        CHECK(g2.dense() == QiMatrix::identity(rep.dim_delta()));
    }
}

TEST_CASE("dense and direct gamma application agree") {
    for (int m = 1; m <= 4; ++m) {
        SpinRep rep = SpinRep::even(m);
        for (int mu = 1; mu <= rep.n(); ++mu) {
            QiMatrix dense = rep.gamma_dense(mu);
            for (int a = 0; a < rep.dim_delta(); ++a) {
                MultiVector in = rep.basis_spinor(static_cast<std::uint32_t>(a));
                MultiVector out = rep.apply_gamma_direct(mu, in);
                std::vector<Qi> coords(rep.dim_delta(), Qi(0));
                coords[a] = Qi(1);
                CHECK(rep.coords(out) == dense.apply(coords));
            }
        }
    }
}

TEST_CASE("chirality: gammas swap the halves; split has dims 2^{m-1}") {
    SpinRep rep = SpinRep::even(2);
    auto [plus, minus] = rep.chirality_split();
    CHECK(plus == std::vector<std::uint32_t>{0u, 3u});   // 1, e1^e2
    CHECK(minus == std::vector<std::uint32_t>{1u, 2u});  // e1, e2
    SpinRep rep3 = SpinRep::even(3);
    auto [p3, m3] = rep3.chirality_split();
    CHECK(p3.size() == 4);
    CHECK(m3.size() == 4);
    for (int mu = 1; mu <= rep3.n(); ++mu) {
        const MonoEndo& g = rep3.gamma(mu);
        for (int a = 0; a < rep3.dim_delta(); ++a) {
            REQUIRE(!g.coeff[a].is_zero());
            CHECK(SpinRep::chirality_of_index(static_cast<std::uint32_t>(a)) !=
                  SpinRep::chirality_of_index(g.target[a]));
        }
    }
}

TEST_CASE("odd-top variant: Gamma3 = i Gamma1 Gamma2 at m=1, relations hold") {
    SpinRep rep = SpinRep::odd_top(1);
    CHECK(rep.n() == 3);
    SpinRep parent = SpinRep::even(1);
    MonoEndo prod = parent.gamma(1).compose(parent.gamma(2)).scaled(Qi::i());
    CHECK(rep.gamma(3).dense() == prod.dense());
    CHECK(rep.clifford_relations_hold());
    CHECK(rep.gammas_hermitian());
    CHECK(SpinRep::odd_top(2).clifford_relations_hold());
    CHECK(SpinRep::odd_top(3).clifford_relations_hold());
}

TEST_CASE("odd-reduced variant: n=7 Clifford module preserving chirality") {
    SpinRep rep = SpinRep::odd_reduced(4);
    CHECK(rep.n() == 7);
    CHECK(rep.clifford_relations_hold());
    CHECK(rep.gammas_hermitian());
    for (int mu = 1; mu <= 7; ++mu) {
        const MonoEndo& g = rep.gamma(mu);
        for (int a = 0; a < rep.dim_delta(); ++a) {
            REQUIRE(!g.coeff[a].is_zero());
            CHECK(SpinRep::chirality_of_index(static_cast<std::uint32_t>(a)) ==
                  SpinRep::chirality_of_index(g.target[a]));
        }
    }
    CHECK(SpinRep::odd_reduced(2).clifford_relations_hold());
    CHECK(SpinRep::odd_reduced(3).clifford_relations_hold());
}

TEST_CASE("resource guard rejects out-of-range m") {
    CHECK_THROWS(SpinRep::even(0));
    CHECK_THROWS(SpinRep::even(8));
    CHECK_NOTHROW(SpinRep::even(8, 8));
}

TEST_CASE("gamma_antisym: disjoint product, zero on repeats, antisymmetry") {
    SpinRep rep = SpinRep::even(3);
    MonoEndo g12 = rep.gamma_antisym({1, 2});
    MonoEndo prod = rep.gamma(1).compose(rep.gamma(2));
    CHECK(g12.dense() == prod.dense());
    CHECK(rep.gamma_antisym({1, 1}).dense().is_zero());
    CHECK(rep.gamma_antisym({2, 1}).dense() == (-Qi(1) * g12.dense()));
    CHECK_THROWS(rep.gamma_antisym({0}));
    CHECK_THROWS(rep.gamma_antisym({7}));
}

TEST_CASE("bilinear symmetry signs measured = closed form, m = 1..7") {
    for (int m = 1; m <= 7; ++m) {
        SpinRep rep = SpinRep::even(m);
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(rep, k);
            CHECK(c.s_c() == closed_form_s_c(k, m));
            CHECK(c.s_gamma() == closed_form_s_gamma(k, m));
            CHECK(c.preserves_chirality() == (m % 2 == 0));
            CHECK(c.form().nondegenerate());
        }
    }
}

TEST_CASE("spec sign spot checks: m=2 A skew; m=3 B symmetric with skew gammas") {
    SpinRep rep2 = SpinRep::even(2);
    CHECK(Bilinear(rep2, BilinearKind::A).s_c() == 1);
    SpinRep rep3 = SpinRep::even(3);
    Bilinear b3(rep3, BilinearKind::B);
    CHECK(b3.s_c() == 0);
    CHECK(b3.s_gamma() == 1);
}

TEST_CASE("m=1: A = Gamma1 with A(1,e1)=1 and A(1,1)=0") {
    SpinRep rep = SpinRep::even(1);
    Bilinear a(rep, BilinearKind::A);
    MultiVector one = MultiVector::scalar(1, Qi(1));
    MultiVector e1 = MultiVector::basis_letters(1, {1});
    CHECK(a.eval(one, e1) == Qi(1));
    CHECK(a.eval(one, one) == Qi(0));
}

TEST_CASE("pin invariance: C(Gm eta, Gm theta) = (-1)^{m-1 or m} C(eta,theta)") {
    for (int m = 1; m <= 4; ++m) {
        SpinRep rep = SpinRep::even(m);
        Bilinear a(rep, BilinearKind::A), b(rep, BilinearKind::B);
        Qi sa = Qi::sign_pow(m - 1), sb = Qi::sign_pow(m);
        for (int mu = 1; mu <= rep.n(); ++mu) {
            for (int x = 0; x < rep.dim_delta(); ++x) {
                MultiVector ex = rep.basis_spinor(static_cast<std::uint32_t>(x));
                MultiVector gx = rep.apply_gamma(mu, ex);
                for (int y = 0; y < rep.dim_delta(); ++y) {
                    MultiVector ey = rep.basis_spinor(static_cast<std::uint32_t>(y));
                    MultiVector gy = rep.apply_gamma(mu, ey);
                    CHECK(a.eval(gx, gy) == sa * a.eval(ex, ey));
                    CHECK(b.eval(gx, gy) == sb * b.eval(ex, ey));
                }
            }
        }
    }
}

TEST_CASE("spin invariance: C(Gmn eta, theta) + C(eta, Gmn theta) = 0") {
    for (int m = 2; m <= 4; ++m) {
        SpinRep rep = SpinRep::even(m);
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(rep, k);
            for (int mu = 1; mu <= rep.n(); ++mu) {
                for (int nu = mu + 1; nu <= rep.n(); ++nu) {
                    MonoEndo g = rep.gamma_antisym({mu, nu});
                    for (int x = 0; x < rep.dim_delta(); ++x) {
                        MultiVector ex = rep.basis_spinor(static_cast<std::uint32_t>(x));
                        MultiVector gex = rep.from_coords(g.dense().apply(rep.coords(ex)));
                        for (int y = 0; y < rep.dim_delta(); ++y) {
                            MultiVector ey = rep.basis_spinor(static_cast<std::uint32_t>(y));
                            MultiVector gey = rep.from_coords(g.dense().apply(rep.coords(ey)));
                            CHECK((c.eval(gex, ey) + c.eval(ex, gey)).is_zero());
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("dualize round-trips and follows the chirality rule") {
    for (int m = 1; m <= 4; ++m) {
        SpinRep rep = SpinRep::even(m);
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(rep, k);
            for (int a = 0; a < rep.dim_delta(); ++a) {
                MultiVector eta = rep.basis_spinor(static_cast<std::uint32_t>(a));
                std::vector<Qi> co = c.dualize(rep, eta);
                CHECK(c.undualize(rep, co) == eta);
                // support chirality: same for m even, opposite for m odd
                for (std::size_t b = 0; b < co.size(); ++b) {
                    if (co[b].is_zero()) continue;
                    int src = SpinRep::chirality_of_index(static_cast<std::uint32_t>(a));
                    int dst = SpinRep::chirality_of_index(static_cast<std::uint32_t>(b));
                    CHECK((m % 2 == 0 ? src == dst : src != dst));
                }
            }
            // C(eta)(theta) = C(theta, eta)
            MultiVector eta = rep.basis_spinor(0);
            std::vector<Qi> co = c.dualize(rep, eta);
            for (int t = 0; t < rep.dim_delta(); ++t) {
                MultiVector theta = rep.basis_spinor(static_cast<std::uint32_t>(t));
                CHECK(co[t] == c.eval(theta, eta));
            }
        }
    }
}

TEST_CASE("bilinear is built on the even parent rep only") {
    CHECK_THROWS(Bilinear(SpinRep::odd_reduced(2), BilinearKind::A));
    CHECK_THROWS(Bilinear(SpinRep::odd_top(2), BilinearKind::A));
}
