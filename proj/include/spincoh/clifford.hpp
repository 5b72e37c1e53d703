// Spin representations of Spin(n) on Delta = Lambda^*(U_C): gamma matrices
// via wedge/contract, chirality split, the odd-dimensional variants, and the
// A/B charge-conjugation bilinears with their measured symmetry signs.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spincoh/linalg.hpp"
#include "spincoh/multivector.hpp"
#include "spincoh/rational.hpp"

namespace spincoh {

// Monomial endomorphism of Delta: every basis spinor maps to a single basis
// spinor times a scalar (all gamma matrices and A/B have this shape).
struct MonoEndo {
    // per source index: target index and coefficient (coefficient 0 = kills).
    std::vector<std::uint32_t> target;
    std::vector<Qi> coeff;

    explicit MonoEndo(int dim = 0)
        : target(static_cast<std::size_t>(dim), 0), coeff(static_cast<std::size_t>(dim), Qi(0)) {}
    int dim() const { return static_cast<int>(target.size()); }

    static MonoEndo identity(int dim) {
        MonoEndo e(dim);
        for (int s = 0; s < dim; ++s) {
            e.target[s] = static_cast<std::uint32_t>(s);
            e.coeff[s] = Qi(1);
        }
        return e;
    }

    MonoEndo scaled(const Qi& c) const {
        MonoEndo e = *this;
        for (auto& x : e.coeff) x = c * x;
        return e;
    }

    // this ∘ other
    MonoEndo compose(const MonoEndo& other) const {
        MonoEndo e(dim());
        for (int s = 0; s < dim(); ++s) {
            if (other.coeff[s].is_zero()) continue;
            std::uint32_t mid = other.target[s];
            if (coeff[mid].is_zero()) continue;
            e.target[s] = target[mid];
            e.coeff[s] = coeff[mid] * other.coeff[s];
        }
        return e;
    }

    QiMatrix dense() const {
        QiMatrix m(dim(), dim());
        for (int s = 0; s < dim(); ++s)
            if (!coeff[s].is_zero()) m.at(static_cast<int>(target[s]), s) = coeff[s];
        return m;
    }
};

enum class RepVariant { Even, OddTop, OddReduced };
enum class BilinearKind { A, B };

inline std::string to_string(BilinearKind k) { return k == BilinearKind::A ? "A" : "B"; }

class SpinRep {
public:
    // Even rep of Spin(2m): Gamma(e_i) = e_i^ + e_i-|, Gamma(e_{m+i}) = -i e_i^ + i e_i-|.
    static SpinRep even(int m, int max_m = 7) {
        guard(m, max_m);
        SpinRep rep;
        rep.m_ = m;
        rep.n_ = 2 * m;
        rep.variant_ = RepVariant::Even;
        rep.build_even_gammas(m);
        return rep;
    }

    // Spin(2m+1): even gammas plus Gamma_{2m+1} = i^m Gamma_1 ... Gamma_{2m}.
    static SpinRep odd_top(int m, int max_m = 7) {
        guard(m, max_m);
        SpinRep rep;
        rep.m_ = m;
        rep.n_ = 2 * m + 1;
        rep.variant_ = RepVariant::OddTop;
        rep.build_even_gammas(m);
        MonoEndo top = MonoEndo::identity(rep.dim_delta());
        for (int mu = 2 * m; mu >= 1; --mu) top = rep.gammas_[mu - 1].compose(top);
        rep.gammas_.push_back(top.scaled(Qi::i_pow(m)));
        return rep;
    }

    // Spin(2m-1) on the chirality halves of the Spin(2m) module:
    // tilde-Gamma_mu = i Gamma_mu Gamma_{2m}, mu = 1..2m-1. Each half is a
    // Clifford module; chirality is preserved.
    static SpinRep odd_reduced(int m, int max_m = 7) {
        guard(m, max_m);
        if (m < 1) throw std::invalid_argument("odd_reduced: m must be >= 1");
        SpinRep parent = even(m, max_m);
        SpinRep rep;
        rep.m_ = m;
        rep.n_ = 2 * m - 1;
        rep.variant_ = RepVariant::OddReduced;
        for (int mu = 1; mu <= 2 * m - 1; ++mu) {
            MonoEndo g = parent.gammas_[mu - 1].compose(parent.gammas_[2 * m - 1]);
            rep.gammas_.push_back(g.scaled(Qi::i()));
        }
        return rep;
    }

    int n() const { return n_; }
    int m() const { return m_; }
    RepVariant variant() const { return variant_; }
    int dim_delta() const { return 1 << m_; }

    const MonoEndo& gamma(int mu) const {
        if (mu < 1 || mu > n_) throw std::out_of_range("gamma: index out of range");
        return gammas_[mu - 1];
    }
    QiMatrix gamma_dense(int mu) const { return gamma(mu).dense(); }

    // Spinors are multivectors over m letters; basis index = bit pattern.
    MultiVector basis_spinor(std::uint32_t index) const {
        return MultiVector::basis(m_, Word::from_mask(index));
    }
    static std::uint32_t word_index(const Word& w) { return static_cast<std::uint32_t>(w.lo); }

    std::vector<Qi> coords(const MultiVector& spinor) const {
        std::vector<Qi> v(dim_delta(), Qi(0));
        for (const auto& [w, c] : spinor.terms()) v[word_index(w)] = c;
        return v;
    }
    MultiVector from_coords(const std::vector<Qi>& v) const {
        MultiVector out(m_);
        for (std::size_t a = 0; a < v.size(); ++a)
            out.add_term(Word::from_mask(a), v[a]);
        return out;
    }

    MultiVector apply_gamma(int mu, const MultiVector& spinor) const {
        const MonoEndo& g = gamma(mu);
        MultiVector out(m_);
        for (const auto& [w, c] : spinor.terms()) {
            std::uint32_t s = word_index(w);
            if (g.coeff[s].is_zero()) continue;
            out.add_term(Word::from_mask(g.target[s]), g.coeff[s] * c);
        }
        return out;
    }

    // Direct evaluation of the defining formulas (no matrix); must agree with
    // apply_gamma on the even gammas.
    MultiVector apply_gamma_direct(int mu, const MultiVector& spinor) const {
        if (variant_ == RepVariant::OddReduced)
            throw std::logic_error("apply_gamma_direct: even/odd-top gammas only");
        if (mu == 2 * m_ + 1)
            throw std::logic_error("apply_gamma_direct: top gamma has no direct form");
        int j = mu <= m_ ? mu : mu - m_;
        MultiVector basis_ej = MultiVector::basis(m_, Word::single(j - 1));
        MultiVector w = wedge(basis_ej, spinor);
        MultiVector c = contract(j, spinor);
        if (mu <= m_) return w + c;
        return Qi::i() * (c - w);
    }

    // Gamma(v) = sum_mu v_mu Gamma_mu for v in V_C (1-based coordinates).
    MultiVector apply_gamma_vec(const std::vector<Qi>& v, const MultiVector& spinor) const {
        MultiVector out(m_);
        for (int mu = 1; mu <= n_ && mu <= static_cast<int>(v.size()); ++mu)
            if (!v[mu - 1].is_zero()) out += v[mu - 1] * apply_gamma(mu, spinor);
        return out;
    }

    // Fully antisymmetrized Gamma_{mu_1...mu_p}; returns the zero map on
    // repeated indices, otherwise sign * product in ascending order.
    MonoEndo gamma_antisym(const std::vector<int>& indices) const {
        for (int mu : indices)
            if (mu < 1 || mu > n_) throw std::out_of_range("gamma_antisym: index out of range");
        std::vector<int> sorted = indices;
        int sign = 1;
        for (std::size_t a = 0; a < sorted.size(); ++a)
            for (std::size_t b = a + 1; b < sorted.size(); ++b)
                if (sorted[a] > sorted[b]) {
                    std::swap(sorted[a], sorted[b]);
                    sign = -sign;
                }
        for (std::size_t a = 0; a + 1 < sorted.size(); ++a)
            if (sorted[a] == sorted[a + 1]) return MonoEndo(dim_delta());
        MonoEndo p = MonoEndo::identity(dim_delta());
        for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
            p = gamma(*it).compose(p);
        return sign > 0 ? p : p.scaled(Qi(-1));
    }

    // +1 for even exterior degree (Delta^+), -1 for odd (Delta^-).
    static int chirality_of_index(std::uint32_t index) {
        return std::popcount(index) % 2 == 0 ? 1 : -1;
    }

    // Bases of Delta^+ and Delta^- by word parity (even variant only).
    std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> chirality_split() const {
        if (variant_ != RepVariant::Even)
            throw std::logic_error("chirality_split: unsupported for odd variants");
        std::vector<std::uint32_t> plus, minus;
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(dim_delta()); ++a)
            (chirality_of_index(a) > 0 ? plus : minus).push_back(a);
        return {plus, minus};
    }

    bool clifford_relations_hold() const {
        for (int mu = 1; mu <= n_; ++mu) {
            for (int nu = mu; nu <= n_; ++nu) {
                const MonoEndo& g1 = gamma(mu);
                const MonoEndo& g2 = gamma(nu);
                MonoEndo a = g1.compose(g2);
                MonoEndo b = g2.compose(g1);
                Qi want = (mu == nu) ? Qi(2) : Qi(0);
                for (int s = 0; s < dim_delta(); ++s) {
                    // both compositions are monomial; the sum must be want*Id
                    Qi ca = a.coeff[s], cb = b.coeff[s];
                    std::uint32_t ta = a.target[s], tb = b.target[s];
                    bool ok;
                    if (ca.is_zero() && cb.is_zero())
                        ok = want.is_zero();
                    else if (!ca.is_zero() && !cb.is_zero() && ta == tb)
                        ok = (ta == static_cast<std::uint32_t>(s)) ? (ca + cb == want)
                                                                   : (ca + cb).is_zero();
                    else if (!ca.is_zero() && cb.is_zero())
                        ok = (ta == static_cast<std::uint32_t>(s)) && ca == want;
                    else
                        ok = (tb == static_cast<std::uint32_t>(s)) && cb == want;
                    if (!ok) return false;
                }
            }
        }
        return true;
    }

    bool gammas_hermitian() const {
        // <G e_a, e_b> = <e_a, G e_b> for all basis pairs; monomial shortcut.
        for (int mu = 1; mu <= n_; ++mu) {
            const MonoEndo& g = gamma(mu);
            for (int a = 0; a < dim_delta(); ++a) {
                if (g.coeff[a].is_zero()) continue;
                std::uint32_t b = g.target[a];
                // <G e_a, e_b> = conj(coeff_a); <e_a, G e_b> = coeff of e_a in G e_b
                Qi lhs = g.coeff[a].conj();
                Qi rhs = (g.target[b] == static_cast<std::uint32_t>(a)) ? g.coeff[b] : Qi(0);
                if (lhs != rhs) return false;
            }
        }
        return true;
    }

private:
    static void guard(int m, int max_m) {
        if (m < 1 || m > max_m)
            throw std::invalid_argument("SpinRep: m out of guarded range [1," +
                                        std::to_string(max_m) + "]");
    }

    void build_even_gammas(int m) {
        int dim = 1 << m;
        for (int mu = 1; mu <= 2 * m; ++mu) {
            MonoEndo g(dim);
            int j = mu <= m ? mu : mu - m;
            std::uint32_t bit = 1u << (j - 1);
            for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
                std::uint32_t t = s ^ bit;
                int below = std::popcount(s & (bit - 1));
                Qi c = (below % 2 == 0) ? Qi(1) : Qi(-1);
                if (s & bit) {
                    // contraction e_j -| e_S
                    if (mu > m) c = Qi::i() * c;
                } else {
                    // wedge e_j ^ e_S
                    if (mu > m) c = -Qi::i() * c;
                }
                g.target[s] = t;
                g.coeff[s] = c;
            }
            gammas_.push_back(g);
        }
    }

    int n_ = 0;
    int m_ = 0;
    RepVariant variant_ = RepVariant::Even;
    std::vector<MonoEndo> gammas_;
};

// Monomial bilinear form: per column B one nonzero row.
struct MonoBilinear {
    std::vector<std::uint32_t> row;  // per column
    std::vector<Qi> val;

    explicit MonoBilinear(int dim = 0)
        : row(static_cast<std::size_t>(dim), 0), val(static_cast<std::size_t>(dim), Qi(0)) {}
    int dim() const { return static_cast<int>(row.size()); }

    Qi entry(std::uint32_t r, std::uint32_t c) const {
        return (!val[c].is_zero() && row[c] == r) ? val[c] : Qi(0);
    }

    // (this . E)_{AB} = sum_E this_{AE} E_{EB} for a monomial endomorphism.
    MonoBilinear compose_endo(const MonoEndo& e) const {
        MonoBilinear out(dim());
        for (int b = 0; b < dim(); ++b) {
            if (e.coeff[b].is_zero()) continue;
            std::uint32_t mid = e.target[b];
            if (val[mid].is_zero()) continue;
            out.row[b] = row[mid];
            out.val[b] = val[mid] * e.coeff[b];
        }
        return out;
    }

    QiMatrix dense() const {
        QiMatrix m(dim(), dim());
        for (int c = 0; c < dim(); ++c)
            if (!val[c].is_zero()) m.at(static_cast<int>(row[c]), c) = val[c];
        return m;
    }

    // +1 symmetric, -1 skew, 0 neither (degenerate input would also give 0).
    int symmetry() const {
        int sign = 0;
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim()); ++b) {
            if (val[b].is_zero()) continue;
            std::uint32_t a = row[b];
            Qi other = entry(b, a);
            int s;
            if (val[b] == other) s = 1;
            else if (val[b] == -other) s = -1;
            else return 0;
            if (sign == 0) sign = s;
            else if (sign != s) return 0;
        }
        return sign;
    }

    bool nondegenerate() const {
        std::vector<bool> seen(dim(), false);
        for (int c = 0; c < dim(); ++c) {
            if (val[c].is_zero()) return false;
            if (seen[row[c]]) return false;
            seen[row[c]] = true;
        }
        return true;
    }
};

// A/B charge-conjugation data: the endomorphism, the bilinear matrix
// C(eta,theta) = <C(conj eta), theta>, and the measured symmetry signs.
class Bilinear {
public:
    Bilinear(const SpinRep& rep, BilinearKind kind) : kind_(kind), dim_(rep.dim_delta()) {
        if (rep.variant() != RepVariant::Even)
            throw std::invalid_argument(
                "Bilinear: build on the parent even rep (odd variants reuse it)");
        int m = rep.m();
        endo_ = MonoEndo::identity(dim_);
        if (kind == BilinearKind::A) {
            for (int mu = m; mu >= 1; --mu) endo_ = rep.gamma(mu).compose(endo_);
        } else {
            for (int mu = 2 * m; mu >= m + 1; --mu) endo_ = rep.gamma(mu).compose(endo_);
        }
        // C_{AB} = <C(e_A), e_B> = conj(c_A) at column B = T(A)
        form_ = MonoBilinear(dim_);
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(dim_); ++a) {
            if (endo_.coeff[a].is_zero())
                throw std::logic_error("Bilinear: degenerate charge conjugation");
            std::uint32_t b = endo_.target[a];
            form_.row[b] = a;
            form_.val[b] = endo_.coeff[a].conj();
        }
        if (!form_.nondegenerate()) throw std::logic_error("Bilinear: singular form");
        int sym = form_.symmetry();
        if (sym == 0) throw std::logic_error("Bilinear: form neither symmetric nor skew");
        s_c_ = sym > 0 ? 0 : 1;
        // inverse-transpose: the form on the dual basis, Sum_E G^{EA} C_{EB} = delta^A_B
        dual_ = MonoBilinear(dim_);
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim_); ++b) {
            std::uint32_t a = form_.row[b];
            dual_.row[a] = b;
            dual_.val[a] = form_.val[b].inverse();
        }
        // s_Gamma measured from C.Gamma_mu, uniform over mu
        int sg = 0;
        for (int mu = 1; mu <= rep.n(); ++mu) {
            int s = form_.compose_endo(rep.gamma(mu)).symmetry();
            if (s == 0) throw std::logic_error("Bilinear: C.Gamma_mu not (skew)symmetric");
            if (sg == 0) sg = s;
            else if (sg != s) throw std::logic_error("Bilinear: s_Gamma not uniform over mu");
        }
        s_gamma_ = sg > 0 ? 0 : 1;
        // chirality behavior measured from the endomorphism (preserves iff the
        // word parity is unchanged, i.e. m even)
        bool preserves = true, swaps = true;
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(dim_); ++a) {
            int ca = SpinRep::chirality_of_index(a);
            int cb = SpinRep::chirality_of_index(endo_.target[a]);
            if (ca != cb) preserves = false;
            if (ca == cb) swaps = false;
        }
        if (preserves == swaps) throw std::logic_error("Bilinear: no uniform chirality behavior");
        preserves_chirality_ = preserves;
    }

    BilinearKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int s_c() const { return s_c_; }
    int s_gamma() const { return s_gamma_; }
    bool preserves_chirality() const { return preserves_chirality_; }

    const MonoEndo& endo() const { return endo_; }
    const MonoBilinear& form() const { return form_; }
    const MonoBilinear& dual_form() const { return dual_; }

    // C(eta, theta), exact.
    Qi eval(const MultiVector& eta, const MultiVector& theta) const {
        Qi s(0);
        for (const auto& [wa, ca] : eta.terms()) {
            std::uint32_t a = SpinRep::word_index(wa);
            // row a of the form: columns b with form.row[b] == a, i.e. b = endo target of a
            std::uint32_t b = endo_.target[a];
            Qi cab = form_.val[b];
            Qi cb = theta.coeff(Word::from_mask(b));
            if (!cb.is_zero()) s += ca * cab * cb;
        }
        return s;
    }

    // C^{-1}(psi, chi) on dual coordinates.
    Qi eval_dual(const std::vector<Qi>& psi, const std::vector<Qi>& chi) const {
        Qi s(0);
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(dim_); ++a) {
            if (psi[a].is_zero() || dual_.val[a].is_zero()) continue;
            std::uint32_t b = dual_.row[a];
            if (!chi[b].is_zero()) s += psi[a] * dual_.val[a] * chi[b];
        }
        return s;
    }

    // Cospinor of a spinor: eta_A = C_{AB} eta^B.
    std::vector<Qi> dualize(const SpinRep& rep, const MultiVector& eta) const {
        std::vector<Qi> coords = rep.coords(eta);
        std::vector<Qi> out(dim_, Qi(0));
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim_); ++b)
            if (!coords[b].is_zero() && !form_.val[b].is_zero())
                out[form_.row[b]] += form_.val[b] * coords[b];
        return out;
    }
    // Inverse: psi^A = psi_B (C^{-1})^{BA}.
    MultiVector undualize(const SpinRep& rep, const std::vector<Qi>& psi) const {
        std::vector<Qi> out(dim_, Qi(0));
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim_); ++b)
            if (!psi[b].is_zero() && !dual_.val[b].is_zero())
                out[dual_.row[b]] += psi[b] * dual_.val[b];
        return rep.from_coords(out);
    }

    // Gamma action on cospinors: (Gamma psi)(eta) = psi(Gamma eta).
    static std::vector<Qi> gamma_on_cospinor(const MonoEndo& g, const std::vector<Qi>& psi) {
        std::vector<Qi> out(psi.size(), Qi(0));
        for (std::size_t s = 0; s < psi.size(); ++s) {
            if (g.coeff[s].is_zero()) continue;
            std::uint32_t t = g.target[s];
            if (!psi[t].is_zero()) out[s] += psi[t] * g.coeff[s];
        }
        return out;
    }

private:
    BilinearKind kind_;
    int dim_;
    MonoEndo endo_;
    MonoBilinear form_;
    MonoBilinear dual_;
    int s_c_ = 0;
    int s_gamma_ = 0;
    bool preserves_chirality_ = false;
};

// Closed forms from the preliminaries, used as assertions against the
// measured signs (never as definitions).
inline int closed_form_s_c(BilinearKind k, int m) {
    long e = (k == BilinearKind::A) ? static_cast<long>(m) * (m - 1) / 2
                                    : static_cast<long>(m) * (m + 1) / 2;
    return static_cast<int>(e % 2);
}
inline int closed_form_s_gamma(BilinearKind k, int m) {
    long e = (k == BilinearKind::A) ? static_cast<long>(m - 1) * (m + 2) / 2
                                    : static_cast<long>(m) * (m + 3) / 2;
    return static_cast<int>(e % 2);
}

}  // namespace spincoh
