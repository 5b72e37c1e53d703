// Bilinear-to-form machinery: the C Gamma^(p) maps, the symmetry sign table,
// and verification of the Fierz expansion of psi (x) chi over form-valued
// bilinears.
#pragma once

#include <optional>
#include <vector>

#include "spincoh/clifford.hpp"
#include "spincoh/multivector.hpp"

namespace spincoh {

inline std::vector<Word> subsets_of_size(int n, int p) {
    std::vector<Word> out;
    std::vector<int> idx(p);
    for (int i = 0; i < p; ++i) idx[i] = i;
    if (p > n) return out;
    while (true) {
        Word w;
        for (int i : idx) w.set(i);
        out.push_back(w);
        int j = p - 1;
        while (j >= 0 && idx[j] == n - p + j) --j;
        if (j < 0) break;
        ++idx[j];
        for (int k = j + 1; k < p; ++k) idx[k] = idx[k - 1] + 1;
    }
    return out;
}

// sigma(p) exponent of eq-style sign: (1/2)p(p-1) + (p+1) s_C + p s_Gamma.
inline int cgamma_sign_exponent(int p, int s_c, int s_gamma) {
    long e = static_cast<long>(p) * (p - 1) / 2 + static_cast<long>(p + 1) * s_c +
             static_cast<long>(p) * s_gamma;
    return static_cast<int>(e % 2);
}

struct SymmetryEntry {
    BilinearKind kind;
    int p;
    int measured_sign;    // +1 symmetric, -1 skew
    int closed_sign;      // from the closed form
    bool restricts_measured;  // C Gamma^(p) maps Delta_pm (x) Delta_pm
    bool restricts_closed;    // (m + p) even
};

class FierzEngine {
public:
    FierzEngine(const SpinRep& rep, const Bilinear& c) : rep_(&rep), c_(&c) {}

    const SpinRep& rep() const { return *rep_; }
    const Bilinear& bilinear() const { return *c_; }

    // C Gamma_{mu_1...mu_p} for an ascending index word, as a monomial form.
    MonoBilinear cgamma(const Word& mus) const {
        MonoEndo g = MonoEndo::identity(rep_->dim_delta());
        auto letters = mus.letters();
        for (auto it = letters.rbegin(); it != letters.rend(); ++it)
            g = rep_->gamma(*it + 1).compose(g);
        return c_->form().compose_endo(g);
    }

    // C Gamma^(p)(eta,theta) = sum_{ascending} C(eta, Gamma_mus theta) e^mus.
    MultiVector cgamma_form(int p, const MultiVector& eta, const MultiVector& theta) const {
        int n = rep_->n();
        if (p < 0 || p > n) throw std::out_of_range("cgamma_form: degree out of range");
        MultiVector out(n);
        std::vector<Qi> ec = rep_->coords(eta);
        std::vector<Qi> tc = rep_->coords(theta);
        for (const Word& mus : subsets_of_size(n, p)) {
            MonoBilinear f = cgamma(mus);
            Qi s(0);
            for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(f.dim()); ++b) {
                if (f.val[b].is_zero() || tc[b].is_zero()) continue;
                if (!ec[f.row[b]].is_zero()) s += ec[f.row[b]] * f.val[b] * tc[b];
            }
            out.add_term(mus, s);
        }
        return out;
    }

    // Measured symmetry and chirality restriction per (kind, p); throws if a
    // single tuple disagrees with the rest.
    SymmetryEntry symmetry_entry(int p) const {
        int n = rep_->n();
        int sign = 0;
        bool restricts = true;
        for (const Word& mus : subsets_of_size(n, p)) {
            MonoBilinear f = cgamma(mus);
            int s = f.symmetry();
            if (s == 0) throw std::logic_error("symmetry_entry: non-uniform tuple");
            if (sign == 0) sign = s;
            else if (sign != s) throw std::logic_error("symmetry_entry: sign not uniform over tuples");
            for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(f.dim()); ++b) {
                if (f.val[b].is_zero()) continue;
                if (SpinRep::chirality_of_index(b) != SpinRep::chirality_of_index(f.row[b]))
                    restricts = false;
            }
        }
        SymmetryEntry e;
        e.kind = c_->kind();
        e.p = p;
        e.measured_sign = sign == 0 ? 1 : sign;  // p > n has no tuples; treat as symmetric-empty
        e.closed_sign = cgamma_sign_exponent(p, c_->s_c(), c_->s_gamma()) == 0 ? 1 : -1;
        e.restricts_measured = restricts;
        e.restricts_closed = ((rep_->m() + p) % 2 == 0);
        return e;
    }

    std::vector<SymmetryEntry> symmetry_table() const {
        std::vector<SymmetryEntry> t;
        for (int p = 0; p <= rep_->n(); ++p) t.push_back(symmetry_entry(p));
        return t;
    }

    // Both sides of the Fierz expansion on one quadruple (dual coordinates for
    // psi, chi; spinors for eta, theta). Returns LHS - RHS.
    Qi fierz_residual(const std::vector<Qi>& psi, const std::vector<Qi>& chi,
                      const MultiVector& eta, const MultiVector& theta) const {
        int n = rep_->n();
        int dim = rep_->dim_delta();
        std::vector<Qi> ec = rep_->coords(eta);
        std::vector<Qi> tc = rep_->coords(theta);
        // LHS = psi(eta) chi(theta)
        Qi lhs(0), pe(0), ct(0);
        for (int a = 0; a < dim; ++a) {
            if (!psi[a].is_zero() && !ec[a].is_zero()) pe += psi[a] * ec[a];
            if (!chi[a].is_zero() && !tc[a].is_zero()) ct += chi[a] * tc[a];
        }
        lhs = pe * ct;
        // RHS
        Qi rhs = c_->eval_dual(psi, chi) * c_->eval(eta, theta);
        int sgn_base = c_->s_gamma() + c_->s_c();
        for (int p = 1; p <= n; ++p) {
            Qi acc(0);
            for (const Word& mus : subsets_of_size(n, p)) {
                MonoEndo g = MonoEndo::identity(dim);
                auto letters = mus.letters();
                for (auto it = letters.rbegin(); it != letters.rend(); ++it)
                    g = rep_->gamma(*it + 1).compose(g);
                // (Gamma^mus C^{-1})(psi,chi) = C^{-1}(psi o Gamma_mus, chi)
                std::vector<Qi> gpsi = Bilinear::gamma_on_cospinor(g, psi);
                Qi left = c_->eval_dual(gpsi, chi);
                if (left.is_zero()) continue;
                // C Gamma_mus (eta, theta)
                MonoBilinear f = c_->form().compose_endo(g);
                Qi right(0);
                for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) {
                    if (f.val[b].is_zero() || tc[b].is_zero()) continue;
                    if (!ec[f.row[b]].is_zero()) right += ec[f.row[b]] * f.val[b] * tc[b];
                }
                acc += left * right;
            }
            if ((static_cast<long>(p) * sgn_base) % 2 == 1) acc = -acc;
            rhs += acc;
        }
        rhs = Qi(1, dim) * rhs;
        return lhs - rhs;
    }

    // Residual on a basis quadruple (indices into the dual / spinor bases).
    Qi fierz_residual_basis(std::uint32_t p_idx, std::uint32_t c_idx, std::uint32_t e_idx,
                            std::uint32_t t_idx) const {
        int dim = rep_->dim_delta();
        std::vector<Qi> psi(dim, Qi(0)), chi(dim, Qi(0));
        psi[p_idx] = Qi(1);
        chi[c_idx] = Qi(1);
        return fierz_residual(psi, chi, rep_->basis_spinor(e_idx), rep_->basis_spinor(t_idx));
    }

    // Monomial data of every C Gamma^{(p)} tuple, for the fast exhaustive and
    // sampled quadruple sweeps: per tuple, the form f, the sign, and the
    // dual-side pairing (for each row P the column Q it pairs with and the
    // scalar weight).
    struct TupleData {
        MonoBilinear f;
        Qi sign;                          // (-1)^{p (s_Gamma + s_C)}
        std::vector<std::uint32_t> qreq;  // per P
        std::vector<Qi> left;             // per P
    };

    std::vector<TupleData> tuple_data() const {
        int n = rep_->n();
        int dim = rep_->dim_delta();
        std::vector<TupleData> out;
        int sgn_base = (c_->s_gamma() + c_->s_c()) % 2;
        for (int p = 0; p <= n; ++p) {
            for (const Word& mus : subsets_of_size(n, p)) {
                TupleData td;
                MonoEndo g = MonoEndo::identity(dim);
                auto letters = mus.letters();
                for (auto it = letters.rbegin(); it != letters.rend(); ++it)
                    g = rep_->gamma(*it + 1).compose(g);
                td.f = c_->form().compose_endo(g);
                td.sign = ((static_cast<long>(p) * sgn_base) % 2 == 0) ? Qi(1) : Qi(-1);
                // (Gamma^mus C^-1)(eps^P, eps^Q): psi o Gamma supported at
                // B = g^{-1}(P); eval_dual pairs B with dual_row[B]
                td.qreq.assign(dim, 0);
                td.left.assign(dim, Qi(0));
                std::vector<std::uint32_t> ginv(dim, 0);
                for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b)
                    if (!g.coeff[b].is_zero()) ginv[g.target[b]] = b;
                const MonoBilinear& dual = c_->dual_form();
                for (std::uint32_t pidx = 0; pidx < static_cast<std::uint32_t>(dim); ++pidx) {
                    std::uint32_t b = ginv[pidx];
                    if (g.coeff[b].is_zero() || g.target[b] != pidx) continue;
                    td.qreq[pidx] = dual.row[b];
                    td.left[pidx] = g.coeff[b] * dual.val[b];
                }
                out.push_back(std::move(td));
            }
        }
        return out;
    }

    // All dim^4 basis quadruples at once via accumulation; exact.
    bool fierz_exhaustive_all_basis() const {
        int dim = rep_->dim_delta();
        auto tuples = tuple_data();
        // rhs[P][Q][E][T] accumulated; compare against dim * delta delta
        std::vector<Qi> rhs(static_cast<std::size_t>(dim) * dim * dim * dim, Qi(0));
        for (const auto& td : tuples) {
            for (std::uint32_t pidx = 0; pidx < static_cast<std::uint32_t>(dim); ++pidx) {
                if (td.left[pidx].is_zero()) continue;
                Qi lw = td.sign * td.left[pidx];
                std::uint32_t q = td.qreq[pidx];
                for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t) {
                    if (td.f.val[t].is_zero()) continue;
                    std::uint32_t e = td.f.row[t];
                    std::size_t key = ((static_cast<std::size_t>(pidx) * dim + q) * dim + e) * dim + t;
                    rhs[key] += lw * td.f.val[t];
                }
            }
        }
        Qi dq(dim);
        for (std::uint32_t pidx = 0; pidx < static_cast<std::uint32_t>(dim); ++pidx)
            for (std::uint32_t q = 0; q < static_cast<std::uint32_t>(dim); ++q)
                for (std::uint32_t e = 0; e < static_cast<std::uint32_t>(dim); ++e)
                    for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(dim); ++t) {
                        std::size_t key =
                            ((static_cast<std::size_t>(pidx) * dim + q) * dim + e) * dim + t;
                        Qi want = (pidx == e && q == t) ? dq : Qi(0);
                        if (rhs[key] != want) return false;
                    }
        return true;
    }

    // Seeded sample of basis quadruples (for n beyond the exhaustive range).
    bool fierz_sampled_basis(int count, std::uint64_t seed) const {
        int dim = rep_->dim_delta();
        auto tuples = tuple_data();
        Rng rng(seed);
        for (int iter = 0; iter < count; ++iter) {
            std::uint32_t pidx = static_cast<std::uint32_t>(rng.below(dim));
            std::uint32_t q = static_cast<std::uint32_t>(rng.below(dim));
            std::uint32_t e = static_cast<std::uint32_t>(rng.below(dim));
            std::uint32_t t = static_cast<std::uint32_t>(rng.below(dim));
            Qi rhs(0);
            for (const auto& td : tuples) {
                if (td.left[pidx].is_zero() || td.qreq[pidx] != q) continue;
                if (td.f.val[t].is_zero() || td.f.row[t] != e) continue;
                rhs += td.sign * td.left[pidx] * td.f.val[t];
            }
            Qi want = (pidx == e && q == t) ? Qi(dim) : Qi(0);
            if (rhs != want) return false;
        }
        return true;
    }

    // Rank of span{ C Gamma^(mus) restricted to the chiral block } among
    // bilinear forms on that block; used for the product-decomposition
    // dimension counts.
    int restricted_span_dim(int p, int chirality) const {
        return joint_restricted_span_dim({p}, chirality);
    }

    int joint_restricted_span_dim(const std::vector<int>& ps, int chirality) const {
        int n = rep_->n();
        std::vector<std::uint32_t> blk;
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(rep_->dim_delta()); ++a)
            if (SpinRep::chirality_of_index(a) == chirality) blk.push_back(a);
        std::vector<MonoBilinear> forms;
        for (int p : ps)
            for (const Word& mus : subsets_of_size(n, p)) forms.push_back(cgamma(mus));
        QiMatrix rows(static_cast<int>(forms.size()),
                      static_cast<int>(blk.size() * blk.size()));
        for (std::size_t t = 0; t < forms.size(); ++t)
            for (std::size_t i = 0; i < blk.size(); ++i)
                for (std::size_t j = 0; j < blk.size(); ++j)
                    rows.at(static_cast<int>(t), static_cast<int>(i * blk.size() + j)) =
                        forms[t].entry(blk[i], blk[j]);
        return rows.rank();
    }

private:
    const SpinRep* rep_;
    const Bilinear* c_;
};

// Hodge-type involution on middle-degree forms (orientation e_1^...^e_n),
// scaled so it squares to +1; its eigenspaces realize the self-dual and
// anti-self-dual halves used only for dimension counts.
inline MultiVector middle_involution(const MultiVector& alpha, int n) {
    int m = n / 2;
    MultiVector out(n);
    Word full;
    for (int i = 0; i < n; ++i) full.set(i);
    Qi scale = (m % 2 == 0) ? Qi(1) : Qi::i();
    for (const auto& [w, c] : alpha.terms()) {
        if (w.count() != m) throw std::invalid_argument("middle_involution: degree != m");
        Word comp = full.minus(w);
        Qi s = c * scale;
        if (shuffle_sign(w, comp) < 0) s = -s;
        out.add_term(comp, s);
    }
    return out;
}

}  // namespace spincoh
