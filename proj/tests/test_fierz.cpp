#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spincoh/fierz.hpp"

using namespace spincoh;

TEST_CASE("symmetry table: measured equals closed form for n <= 10 here") {
    for (int m = 1; m <= 5; ++m) {
        SpinRep rep = SpinRep::even(m);
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(rep, k);
            FierzEngine fz(rep, c);
            for (const SymmetryEntry& e : fz.symmetry_table()) {
                CHECK(e.measured_sign == e.closed_sign);
                CHECK(e.restricts_measured == e.restricts_closed);
            }
        }
    }
}

TEST_CASE("spot signs: n=6 B p=1 skew; p=m-2 skew and p=m symmetric") {
    SpinRep rep = SpinRep::even(3);
    Bilinear b(rep, BilinearKind::B);
    FierzEngine fz(rep, b);
    CHECK(fz.symmetry_entry(1).measured_sign == -1);
    for (int m = 2; m <= 5; ++m) {
        SpinRep r = SpinRep::even(m);
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(r, k);
            FierzEngine f(r, c);
            CHECK(f.symmetry_entry(m).measured_sign == 1);
            CHECK(f.symmetry_entry(m - 2).measured_sign == -1);
        }
    }
}

TEST_CASE("cgamma_form: p=0 scalar case and bilinearity") {
    SpinRep rep = SpinRep::even(2);
    Bilinear a(rep, BilinearKind::A);
    FierzEngine fz(rep, a);
    MultiVector eta = rep.basis_spinor(1) + Qi::i() * rep.basis_spinor(2);
    MultiVector theta = rep.basis_spinor(0);
    MultiVector f0 = fz.cgamma_form(0, eta, theta);
    CHECK(f0.coeff(Word::empty()) == a.eval(eta, theta));
    // swap symmetry sigma(p) on a p=2 form
    MultiVector f2 = fz.cgamma_form(2, eta, theta);
    MultiVector f2s = fz.cgamma_form(2, theta, eta);
    int exp = cgamma_sign_exponent(2, a.s_c(), a.s_gamma());
    CHECK(f2 == (exp == 0 ? f2s : -f2s));
}

TEST_CASE("golden Kahler-type form at n=6 from the two invariant spinors") {
    SpinRep rep = SpinRep::even(3);
    Bilinear b(rep, BilinearKind::B);
    FierzEngine fz(rep, b);
    MultiVector one = MultiVector::scalar(3, Qi(1));
    MultiVector top = MultiVector::basis_letters(3, {1, 2, 3});
    MultiVector f = fz.cgamma_form(2, top, one);
    // proportional to sum_j e^j ^ e^{j+3}; frozen exact coefficients
    MultiVector want(6);
    for (int j = 1; j <= 3; ++j) {
        Word w;
        w.set(j - 1);
        w.set(j + 2);
        want.add_term(w, Qi(-1));
    }
    CHECK(f == want);
    // same pair under A is also proportional to the Kahler combination
    Bilinear a(rep, BilinearKind::A);
    FierzEngine fza(rep, a);
    MultiVector fa = fza.cgamma_form(2, top, one);
    CHECK(fa == -Qi::i() * want);
}

TEST_CASE("fierz identity: residual exactly zero on all basis quadruples, n=2,4,6") {
    for (int m = 1; m <= 3; ++m) {
        SpinRep rep = SpinRep::even(m);
        int dim = rep.dim_delta();
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(rep, k);
            FierzEngine fz(rep, c);
            for (int p = 0; p < dim; ++p)
                for (int q = 0; q < dim; ++q)
                    for (int e = 0; e < dim; ++e)
                        for (int t = 0; t < dim; ++t)
                            CHECK(fz.fierz_residual_basis(p, q, e, t).is_zero());
        }
    }
}

TEST_CASE("fast exhaustive fierz agrees with the reference residual") {
    for (int m = 1; m <= 2; ++m) {
        SpinRep rep = SpinRep::even(m);
        for (BilinearKind k : {BilinearKind::A, BilinearKind::B}) {
            Bilinear c(rep, k);
            FierzEngine fz(rep, c);
            CHECK(fz.fierz_exhaustive_all_basis());
            CHECK(fz.fierz_sampled_basis(50, 99));
        }
    }
}

TEST_CASE("fierz identity on dense random spinor quadruples at n=4") {
    SpinRep rep = SpinRep::even(2);
    Bilinear c(rep, BilinearKind::B);
    FierzEngine fz(rep, c);
    Rng rng(424242);
    for (int iter = 0; iter < 10; ++iter) {
        int dim = rep.dim_delta();
        std::vector<Qi> psi(dim), chi(dim);
        MultiVector eta(rep.m()), theta(rep.m());
        for (int a = 0; a < dim; ++a) {
            psi[a] = rng.small_qi();
            chi[a] = rng.small_qi();
            eta.add_term(Word::from_mask(static_cast<std::uint64_t>(a)), rng.small_qi());
            theta.add_term(Word::from_mask(static_cast<std::uint64_t>(a)), rng.small_qi());
        }
        CHECK(fz.fierz_residual(psi, chi, eta, theta).is_zero());
    }
}

TEST_CASE("restricted to one dual chirality at n=6 only odd p contributes") {
    SpinRep rep = SpinRep::even(3);
    Bilinear b(rep, BilinearKind::B);
    FierzEngine fz(rep, b);
    // C Gamma^{(p)} restricted to a chirality block vanishes for p of the
    // wrong parity (m odd => odd p restricts).
    for (int p = 0; p <= 6; p += 2) CHECK(fz.restricted_span_dim(p, +1) == 0);
    // decomposition Lambda^1 + Lambda^{3+}: 6 + 10 = 16 = dim(Delta_+ (x) Delta_+)
    CHECK(fz.restricted_span_dim(1, +1) + fz.restricted_span_dim(3, +1) == 16);
    // p=5 duplicates p=1 under duality, adding nothing new
    CHECK(fz.restricted_span_dim(5, +1) == 6);
    CHECK(fz.joint_restricted_span_dim({1, 3}, +1) == 16);
    CHECK(fz.joint_restricted_span_dim({1, 3, 5}, +1) == 16);
}

TEST_CASE("completeness: sum over p of C(n,p) equals (dim Delta)^2") {
    for (int m = 1; m <= 5; ++m) {
        long total = 0;
        int n = 2 * m;
        for (int p = 0; p <= n; ++p)
            total += static_cast<long>(subsets_of_size(n, p).size());
        CHECK(total == (1L << n));
    }
}

TEST_CASE("middle involution squares to one; eigenspaces split evenly") {
    for (int m = 2; m <= 3; ++m) {
        int n = 2 * m;
        int plus = 0, minus = 0;
        for (const Word& w : subsets_of_size(n, m)) {
            MultiVector x = MultiVector::basis(n, w);
            MultiVector jx = middle_involution(x, n);
            CHECK(middle_involution(jx, n) == x);
            // diagonalize the 2-dim invariant pair {x, Jx}
            MultiVector p = x + jx, q = x - jx;
            if (!p.is_zero()) {
                CHECK(middle_involution(p, n) == p);
            }
            if (!q.is_zero()) {
                CHECK(middle_involution(q, n) == -q);
            }
        }
        // eigenvalue split has equal dimensions: rank of (1 +- J) projectors
        auto words = subsets_of_size(n, m);
        int dim = static_cast<int>(words.size());
        std::map<Word, int> index;
        for (int i = 0; i < dim; ++i) index[words[i]] = i;
        QiMatrix jmat(dim, dim);
        for (int i = 0; i < dim; ++i) {
            MultiVector jx = middle_involution(MultiVector::basis(n, words[i]), n);
            for (const auto& [w, c] : jx.terms()) jmat.at(index[w], i) = c;
        }
        QiMatrix pp = jmat + QiMatrix::identity(dim);
        QiMatrix pm = jmat - QiMatrix::identity(dim);
        CHECK(pp.rank() == dim / 2);
        CHECK(pm.rank() == dim / 2);
        plus = pp.rank();
        minus = pm.rank();
        CHECK(plus + minus == dim);
    }
}

TEST_CASE("restricted middle-degree span matches one self-dual half") {
    // m=3: on Delta_+ (x) Delta_+ the p=3 piece spans exactly half of
    // Lambda^3, i.e. C(6,3)/2 = 10 dimensions.
    SpinRep rep = SpinRep::even(3);
    Bilinear b(rep, BilinearKind::B);
    FierzEngine fz(rep, b);
    CHECK(fz.restricted_span_dim(3, +1) == 10);
    CHECK(fz.restricted_span_dim(3, -1) == 10);
    CHECK(fz.restricted_span_dim(1, +1) == 6);
}
