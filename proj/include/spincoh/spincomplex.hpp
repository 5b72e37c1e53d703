// The graded fiber complexes Lambda^*(Delta^*) with their Lambda- and
// Sym-twists, and the operators acting on them: the differential d per
// Fourier mode on flat tori, the algebraic operators D_(p) and Dhat, the
// induced pairings and adjoints, and the Laplacians.
#pragma once

#include <functional>
#include <map>
#include <utility>

#include "spincoh/holonomy.hpp"

namespace spincoh {

// ---------------------------------------------------------------------------
// Fiber pairings and interior products on C = Lambda^*(Delta^*)

// Plain interior product by a spinor (letter-wise contraction weighted by
// the spinor coordinates).
inline MultiVector interior_by_spinor(const std::vector<Qi>& eta, const MultiVector& phi) {
    MultiVector out(phi.ground_dim());
    for (std::size_t a = 0; a < eta.size(); ++a)
        if (!eta[a].is_zero()) out += eta[a] * contract(static_cast<int>(a) + 1, phi);
    return out;
}

// The inner derivation of the paper: scaled by the degree of the argument
// and by (-1)^{s_C}; input is a cospinor, raised through C^{-1}.
inline MultiVector cointerior(const SpinRep& rep, const Bilinear& c, const MultiVector& nu,
                              const MultiVector& phi) {
    std::vector<Qi> nu_coords(rep.dim_delta(), Qi(0));
    for (const auto& [w, coef] : nu.terms()) {
        auto lets = w.letters();
        if (lets.size() != 1) throw std::invalid_argument("cointerior: nu must be degree 1");
        nu_coords[lets[0]] = coef;
    }
    std::vector<Qi> eta = rep.coords(c.undualize(rep, nu_coords));
    MultiVector out(phi.ground_dim());
    for (int l = 0; l <= phi.max_degree(); ++l) {
        MultiVector part = interior_by_spinor(eta, phi.grade(l));
        Qi scale(l);
        if (c.s_c() == 1) scale = -scale;
        out += scale * part;
    }
    return out;
}

// det of the C^{-1} Gram submatrix on two cospinor words (monomial form, so
// the determinant is a signed product or zero).
inline Qi dual_gram_det(const Bilinear& c, const Word& s, const Word& t) {
    auto sl = s.letters();
    auto tl = t.letters();
    if (sl.size() != tl.size()) return Qi(0);
    const MonoBilinear& g = c.dual_form();
    // row a pairs only with column g.row[a] (storage is per-first-argument)
    std::vector<int> target(sl.size());
    std::vector<int> tpos(tl.size());
    std::map<int, int> tindex;
    for (std::size_t j = 0; j < tl.size(); ++j) tindex[tl[j]] = static_cast<int>(j);
    Qi prod(1);
    for (std::size_t i = 0; i < sl.size(); ++i) {
        std::uint32_t col = g.row[sl[i]];
        auto it = tindex.find(static_cast<int>(col));
        if (it == tindex.end() || g.val[sl[i]].is_zero()) return Qi(0);
        target[i] = it->second;
        prod *= g.val[sl[i]];
    }
    // permutation sign of i -> target[i]
    int inv = 0;
    for (std::size_t i = 0; i < target.size(); ++i)
        for (std::size_t j = i + 1; j < target.size(); ++j)
            if (target[i] > target[j]) ++inv;
    std::vector<bool> seen(target.size(), false);
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (seen[target[i]]) return Qi(0);
        seen[target[i]] = true;
    }
    return inv % 2 == 0 ? prod : -prod;
}

// Extension of C^{-1} to C with factorial normalization: the adjoint of the
// cospinor wedge is the paper's scaled inner derivation.
inline Qi pairing_factorial(const Bilinear& c, const MultiVector& phi, const MultiVector& psi) {
    Qi s(0);
    for (const auto& [ws, cs] : phi.terms()) {
        for (const auto& [wt, ct] : psi.terms()) {
            if (ws.count() != wt.count()) continue;
            Qi det = dual_gram_det(c, ws, wt);
            if (det.is_zero()) continue;
            Qi fact(1);
            for (int t = 2; t <= ws.count(); ++t) fact *= Qi(t);
            Qi term = cs * ct * det * fact;
            if (c.s_c() == 1 && ws.count() % 2 == 1) term = -term;
            s += term;
        }
    }
    return s;
}

// L2-normalized extension: the adjoint of the cospinor wedge is the plain
// interior product by the raised spinor.
inline Qi pairing_l2(const Bilinear& c, const MultiVector& phi, const MultiVector& psi) {
    Qi s(0);
    for (const auto& [ws, cs] : phi.terms())
        for (const auto& [wt, ct] : psi.terms()) {
            if (ws.count() != wt.count()) continue;
            Qi det = dual_gram_det(c, ws, wt);
            if (!det.is_zero()) s += cs * ct * det;
        }
    return s;
}

// ---------------------------------------------------------------------------
// Carriers

enum class CospinorCarrier { Full, Plus, Minus };

inline std::vector<std::uint32_t> carrier_letters(const SpinRep& rep, CospinorCarrier cc) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(rep.dim_delta()); ++a) {
        int ch = SpinRep::chirality_of_index(a);
        if (cc == CospinorCarrier::Full || (cc == CospinorCarrier::Plus && ch > 0) ||
            (cc == CospinorCarrier::Minus && ch < 0))
            out.push_back(a);
    }
    return out;
}

inline bool supported_on(const MultiVector& fiber_elem, const std::vector<std::uint32_t>& letters) {
    std::vector<bool> ok(fiber_elem.ground_dim(), false);
    for (std::uint32_t a : letters) ok[a] = true;
    for (const auto& [w, c] : fiber_elem.terms())
        for (int b : w.letters())
            if (!ok[b]) return false;
    return true;
}

// Frame of twist letters: q-form twists are graded by subsets of these
// covectors (standard frame e^mu, or the (1,0) refinement dz^j).
struct TwistFrame {
    std::vector<std::vector<Qi>> covectors;  // each of length n
    int size() const { return static_cast<int>(covectors.size()); }

    static TwistFrame standard(int n) {
        TwistFrame f;
        for (int mu = 0; mu < n; ++mu) {
            std::vector<Qi> v(n, Qi(0));
            v[mu] = Qi(1);
            f.covectors.push_back(v);
        }
        return f;
    }
    // dz^j = e^j + i e^{j+m}: the (1,0) covectors for J(e_j) = e_{j+m}
    static TwistFrame holomorphic(int m) {
        TwistFrame f;
        int n = 2 * m;
        for (int j = 0; j < m; ++j) {
            std::vector<Qi> v(n, Qi(0));
            v[j] = Qi(1);
            v[j + m] = Qi::i();
            f.covectors.push_back(v);
        }
        return f;
    }
    // dzbar^j = e^j - i e^{j+m}
    static TwistFrame antiholomorphic(int m) {
        TwistFrame f;
        int n = 2 * m;
        for (int j = 0; j < m; ++j) {
            std::vector<Qi> v(n, Qi(0));
            v[j] = Qi(1);
            v[j + m] = -Qi::i();
            f.covectors.push_back(v);
        }
        return f;
    }
};

// Element of Lambda^*(twist) (x) Lambda^*(Delta^*): sparse on monomial pairs.
using LambdaElem = std::map<std::pair<Word, Word>, Qi>;

inline void lambda_add(LambdaElem& e, const Word& f, const Word& c, const Qi& v) {
    if (v.is_zero()) return;
    auto key = std::make_pair(f, c);
    auto [it, fresh] = e.emplace(key, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) e.erase(it);
    }
}

// Element of Sym^*(V) (x) Lambda^*(Delta^*): multiset exponent keys.
using SymKey = std::vector<int>;  // sorted letter indices with repetition
using SymElem = std::map<std::pair<SymKey, Word>, Qi>;

inline void sym_add(SymElem& e, const SymKey& k, const Word& c, const Qi& v) {
    if (v.is_zero()) return;
    auto key = std::make_pair(k, c);
    auto [it, fresh] = e.emplace(key, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) e.erase(it);
    }
}

inline std::vector<SymKey> multisets_of_size(int n, int q) {
    std::vector<SymKey> out;
    SymKey cur;
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            rec(v, left - 1);
            cur.pop_back();
        }
    };
    rec(0, q);
    return out;
}

// ---------------------------------------------------------------------------
// Mode data and the operators

struct FourierMode {
    std::vector<Qi> k;  // integer frequencies (stored as rationals)
    std::vector<Qi> a;  // flat line-bundle offsets

    Qi kappa(int mu) const {  // 1-based
        Qi v = k.empty() ? Qi(0) : k[mu - 1];
        if (!a.empty()) v += a[mu - 1];
        return v;
    }
    bool zero_frequency(int n) const {
        for (int mu = 1; mu <= n; ++mu)
            if (!kappa(mu).is_zero()) return false;
        return true;
    }
};

// nu(k) = sum_mu i (k_mu + a_mu) C_zeta^mu as a degree-1 fiber element.
inline MultiVector mode_cospinor(const SpinRep& rep, const Bilinear& c, const MultiVector& zeta,
                                 const FourierMode& mode) {
    MultiVector nu(rep.dim_delta());
    for (int mu = 1; mu <= rep.n(); ++mu) {
        Qi w = Qi::i() * mode.kappa(mu);
        if (w.is_zero()) continue;
        nu += w * cospinor_to_fiber(czeta_mu(rep, c, zeta, mu));
    }
    return nu;
}

// Validation used by the carrier-restricted d: every C_zeta^mu must be
// supported on the requested dual-chirality letters.
inline void validate_d_carrier(const SpinRep& rep, const Bilinear& c, const MultiVector& zeta,
                               CospinorCarrier cc) {
    if (cc == CospinorCarrier::Full) return;
    auto letters = carrier_letters(rep, cc);
    for (int mu = 1; mu <= rep.n(); ++mu) {
        MultiVector cz = cospinor_to_fiber(czeta_mu(rep, c, zeta, mu));
        if (!supported_on(cz, letters))
            throw std::invalid_argument(
                "build_d_mode: chirality error: C_zeta^mu does not land in the requested "
                "dual chirality");
    }
}

// d per mode on the twisted carriers. The twist factor is inert; on the
// Lambda twist d acts with no crossing sign (then d D_(p) + D_(p) d = 0 for
// every p), while on the Sym twist it carries (-1)^q (then d Dhat + Dhat d
// = 0). Each convention is the one under which the corresponding
// anticommutation proposition holds; both are verified exactly in tests.
struct DMode {
    MultiVector nu;  // degree-1 fiber element

    LambdaElem apply(const LambdaElem& x) const {
        LambdaElem out;
        for (const auto& [key, v] : x) {
            MultiVector w = MultiVector::basis(nu.ground_dim(), key.second, v);
            MultiVector nw = wedge(nu, w);
            for (const auto& [cw, cv] : nw.terms()) lambda_add(out, key.first, cw, cv);
        }
        return out;
    }
    SymElem apply(const SymElem& x) const {
        SymElem out;
        for (const auto& [key, v] : x) {
            MultiVector w = MultiVector::basis(nu.ground_dim(), key.second, v);
            MultiVector nw = wedge(nu, w);
            Qi sign = (key.first.size() % 2 == 0) ? Qi(1) : Qi(-1);
            for (const auto& [cw, cv] : nw.terms()) sym_add(out, key.first, cw, sign * cv);
        }
        return out;
    }
    MultiVector apply(const MultiVector& w) const { return wedge(nu, w); }
};

inline DMode build_d_mode(const SpinRep& rep, const Bilinear& c, const MultiVector& zeta,
                          const FourierMode& mode, CospinorCarrier cc = CospinorCarrier::Full) {
    validate_d_carrier(rep, c, zeta, cc);
    return DMode{mode_cospinor(rep, c, zeta, mode)};
}

// The algebraic operator D_(p): Lambda^q (x) C^l -> Lambda^{q-p} (x) C^{l+2}.
// The untwisted form requires C Gamma^(p) skew; with a skew fiber inner
// product h on E = C^2 the symmetric C Gamma^(p) becomes admissible on the
// doubled letter space (the fiber of C(E) = Lambda^*(Delta^* (x) E)).
class DpOperator {
public:
    DpOperator(const SpinRep& rep, const Bilinear& c, int p, const TwistFrame& frame,
               CospinorCarrier cc = CospinorCarrier::Full)
        : p_(p), frame_(frame), fiber_ground_(rep.dim_delta()) {
        FierzEngine fz(rep, c);
        SymmetryEntry e = fz.symmetry_entry(p);
        if (e.measured_sign != -1)
            throw std::invalid_argument(
                "build_Dp: C Gamma^(" + std::to_string(p) +
                ") is symmetric (sign exponent even); the operator is not defined on the "
                "untwisted carrier");
        if (cc != CospinorCarrier::Full && !e.restricts_measured)
            throw std::invalid_argument(
                "build_Dp: C Gamma^(p) does not restrict to the chiral carrier (needs n = "
                "8k+2 or 8k+6)");
        auto letters = carrier_letters(rep, cc);
        for (const Word& s : subsets_of_size(frame_.size(), p_)) {
            MultiVector k = assemble_k(rep, fz, frame_, s, nullptr);
            if (cc != CospinorCarrier::Full) {
                // the operator on a chiral carrier uses the restricted block
                // of C Gamma^(p) (its indices range over Delta_pm only)
                MultiVector proj(k.ground_dim());
                std::vector<bool> ok(k.ground_dim(), false);
                for (std::uint32_t a : letters) ok[a] = true;
                for (const auto& [w, v] : k.terms()) {
                    bool keep = true;
                    for (int b : w.letters()) keep = keep && ok[b];
                    if (keep) proj.add_term(w, v);
                }
                k = proj;
            }
            kcache_[s] = k;
        }
    }

    // Twisted variant per the E-valued definition: C Gamma^(p) symmetric is
    // paired with the 2x2 symplectic h; fiber letters are (A, I) pairs.
    static DpOperator with_skew_twist(const SpinRep& rep, const Bilinear& c, int p,
                                      const TwistFrame& frame) {
        FierzEngine fz(rep, c);
        SymmetryEntry e = fz.symmetry_entry(p);
        if (e.measured_sign != 1)
            throw std::invalid_argument(
                "build_Dp: skew twist applies when C Gamma^(p) is symmetric");
        DpOperator op;
        op.p_ = p;
        op.frame_ = frame;
        op.fiber_ground_ = 2 * rep.dim_delta();
        QiMatrix h(2, 2);
        h.at(0, 1) = Qi(1);
        h.at(1, 0) = Qi(-1);
        for (const Word& s : subsets_of_size(frame.size(), p))
            op.kcache_[s] = assemble_k(rep, fz, frame, s, &h);
        return op;
    }

    int p() const { return p_; }
    int fiber_ground() const { return fiber_ground_; }

    LambdaElem apply(const LambdaElem& x) const {
        LambdaElem out;
        // group the input by form word so each p-subset enumeration is done
        // once per distinct form monomial
        std::map<Word, std::vector<std::pair<Word, Qi>>> grouped;
        for (const auto& [key, v] : x) grouped[key.first].push_back({key.second, v});
        Qi psign = ((static_cast<long>(p_) * (p_ - 1) / 2) % 2 == 0) ? Qi(1) : Qi(-1);
        for (const auto& [form, terms] : grouped) {
            if (form.count() < p_) continue;
            for (const auto& [s1, k2] : kcache_) {
                if (!s1.subset_of(form)) continue;
                Word rest = form.minus(s1);
                int sgn = shuffle_sign(s1, rest);
                Qi pref = (sgn > 0) ? psign : -psign;
                for (const auto& [cword, v] : terms) {
                    Qi base = (cword.count() % 2 == 0) ? pref * v : -(pref * v);
                    MultiVector w = MultiVector::basis(fiber_ground_, cword, Qi(1));
                    MultiVector kw = wedge(k2, w);
                    for (const auto& [cw, cv] : kw.terms()) lambda_add(out, rest, cw, base * cv);
                }
            }
        }
        return out;
    }

    // The wedge coefficient: K(s1) built from C Gamma^{mu...} contracted with
    // the frame covectors of the letters in s1.
    MultiVector kernel_two_cospinor(const Word& s1) const { return kcache_.at(s1); }

private:
    DpOperator() = default;

    // K = sum over ascending tuples of det(frame components) * the matrix of
    // C Gamma^{mus} (optionally tensored with a skew h), as a 2-cospinor.
    // Only tuples inside the union support of the letters' covectors can
    // contribute, so the enumeration runs over that support.
    static MultiVector assemble_k(const SpinRep& rep, const FierzEngine& fz,
                                  const TwistFrame& frame, const Word& s1, const QiMatrix* h) {
        int n = rep.n();
        int dim = rep.dim_delta();
        int p = s1.count();
        auto lets = s1.letters();
        MultiVector out(h ? 2 * dim : dim);
        std::vector<int> support;
        {
            std::vector<bool> used(n, false);
            for (int letter : lets)
                for (int mu = 0; mu < n; ++mu)
                    if (!frame.covectors[letter][mu].is_zero()) used[mu] = true;
            for (int mu = 0; mu < n; ++mu)
                if (used[mu]) support.push_back(mu);
        }
        std::vector<Word> tuples;
        for (const Word& pos : subsets_of_size(static_cast<int>(support.size()), p)) {
            Word mus;
            for (int i : pos.letters()) mus.set(support[i]);
            tuples.push_back(mus);
        }
        for (const Word& mus : tuples) {
            auto ml = mus.letters();
            QiMatrix comp(p, p);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    comp.at(i, j) = frame.covectors[lets[i]][ml[j]];
            Qi det = small_det(comp);
            if (det.is_zero()) continue;
            MonoBilinear f = fz.cgamma(mus);
            if (!h) {
                for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) {
                    if (f.val[b].is_zero()) continue;
                    std::uint32_t a = f.row[b];
                    if (a >= b) continue;  // skew: keep a < b with full value
                    Word w;
                    w.set(static_cast<int>(a));
                    w.set(static_cast<int>(b));
                    out.add_term(w, det * f.val[b]);
                }
            } else {
                // (M (x) h)_{(2a+i),(2b+j)} = M_{ab} h_{ij}; keep u < v terms
                for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) {
                    if (f.val[b].is_zero()) continue;
                    std::uint32_t a = f.row[b];
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) {
                            if (h->at(i, j).is_zero()) continue;
                            std::uint32_t u = 2 * a + i, vtx = 2 * b + j;
                            if (u == vtx) continue;
                            Qi val = det * f.val[b] * h->at(i, j);
                            Word w;
                            if (u < vtx) {
                                w.set(static_cast<int>(u));
                                w.set(static_cast<int>(vtx));
                                out.add_term(w, val);
                            }
                            // u > v contributes via the transposed entry of the
                            // overall-skew matrix; skip to avoid double count
                        }
                }
            }
        }
        return out;
    }

    static Qi small_det(const QiMatrix& m) {
        int n = m.rows();
        if (n == 0) return Qi(1);
        if (n == 1) return m.at(0, 0);
        Qi det(0);
        for (int r = 0; r < n; ++r) {
            if (m.at(r, 0).is_zero()) continue;
            QiMatrix minor(n - 1, n - 1);
            int rr = 0;
            for (int i = 0; i < n; ++i) {
                if (i == r) continue;
                for (int j = 1; j < n; ++j) minor.at(rr, j - 1) = m.at(i, j);
                ++rr;
            }
            Qi term = m.at(r, 0) * small_det(minor);
            det += (r % 2 == 0) ? term : -term;
        }
        return det;
    }

    int p_ = 0;
    TwistFrame frame_;
    int fiber_ground_ = 0;
    std::map<Word, MultiVector> kcache_;
};

// The algebraic operator Dhat: Sym^q (x) C^l -> Sym^{q-1} (x) C^{l+1}.
class DhatOperator {
public:
    DhatOperator(const SpinRep& rep, const Bilinear& c, const MultiVector& zeta)
        : dim_(rep.dim_delta()) {
        if (zeta.is_zero()) throw std::invalid_argument("build_Dhat: zero spinor");
        for (int mu = 1; mu <= rep.n(); ++mu)
            cz_.push_back(cospinor_to_fiber(czeta_mu(rep, c, zeta, mu)));
    }

    // Twisted variant: explicit cospinors over an arbitrary fiber letter
    // space (e.g. (Delta (x) E)^* for the C(E) complexes).
    DhatOperator(int fiber_ground, std::vector<MultiVector> cospinors)
        : dim_(fiber_ground), cz_(std::move(cospinors)) {
        for (const auto& cz : cz_)
            if (cz.ground_dim() != fiber_ground)
                throw std::invalid_argument("build_Dhat: cospinor ground mismatch");
    }

    SymElem apply(const SymElem& x) const {
        SymElem out;
        for (const auto& [key, v] : x) {
            const SymKey& mset = key.first;
            int l = key.second.count();
            Qi base = (l % 2 == 0) ? v : -v;
            std::size_t i = 0;
            while (i < mset.size()) {
                std::size_t j = i;
                while (j < mset.size() && mset[j] == mset[i]) ++j;
                long mult = static_cast<long>(j - i);
                SymKey reduced;
                reduced.reserve(mset.size() - 1);
                for (std::size_t t = 0; t < mset.size(); ++t)
                    if (t != i) reduced.push_back(mset[t]);
                MultiVector w = MultiVector::basis(dim_, key.second, Qi(1));
                MultiVector cw = wedge(cz_[mset[i]], w);
                for (const auto& [ww, cv] : cw.terms())
                    sym_add(out, reduced, ww, Qi(mult) * base * cv);
                i = j;
            }
        }
        return out;
    }

private:
    int dim_;
    std::vector<MultiVector> cz_;
};

// ---------------------------------------------------------------------------
// Block matrices over explicit bases

struct LambdaBasis {
    std::vector<std::pair<Word, Word>> keys;
    std::map<std::pair<Word, Word>, int> index;
};

inline LambdaBasis lambda_basis(const TwistFrame& frame, int q,
                                const std::vector<std::uint32_t>& letters, int l) {
    LambdaBasis b;
    auto formw = subsets_of_size(frame.size(), q);
    auto cw = subsets_of_size(static_cast<int>(letters.size()), l);
    for (const Word& f : formw)
        for (const Word& cpos : cw) {
            Word c;
            for (int pos : cpos.letters()) c.set(static_cast<int>(letters[pos]));
            b.index[{f, c}] = static_cast<int>(b.keys.size());
            b.keys.push_back({f, c});
        }
    return b;
}

template <typename Op>
QiMatrix lambda_block_matrix(const Op& op, const LambdaBasis& src, const LambdaBasis& dst) {
    QiMatrix m(static_cast<int>(dst.keys.size()), static_cast<int>(src.keys.size()));
    for (std::size_t col = 0; col < src.keys.size(); ++col) {
        LambdaElem e;
        lambda_add(e, src.keys[col].first, src.keys[col].second, Qi(1));
        LambdaElem img = op.apply(e);
        for (const auto& [key, v] : img) {
            auto it = dst.index.find(key);
            if (it == dst.index.end())
                throw std::logic_error("lambda_block_matrix: image leaves the target basis");
            m.at(it->second, static_cast<int>(col)) = v;
        }
    }
    return m;
}

struct SymBasis {
    std::vector<std::pair<SymKey, Word>> keys;
    std::map<std::pair<SymKey, Word>, int> index;
};

inline SymBasis sym_basis(int n, int q, const std::vector<std::uint32_t>& letters, int l) {
    SymBasis b;
    auto msets = multisets_of_size(n, q);
    auto cw = subsets_of_size(static_cast<int>(letters.size()), l);
    for (const SymKey& k : msets)
        for (const Word& cpos : cw) {
            Word c;
            for (int pos : cpos.letters()) c.set(static_cast<int>(letters[pos]));
            b.index[{k, c}] = static_cast<int>(b.keys.size());
            b.keys.push_back({k, c});
        }
    return b;
}

template <typename Op>
QiMatrix sym_block_matrix(const Op& op, const SymBasis& src, const SymBasis& dst) {
    QiMatrix m(static_cast<int>(dst.keys.size()), static_cast<int>(src.keys.size()));
    for (std::size_t col = 0; col < src.keys.size(); ++col) {
        SymElem e;
        sym_add(e, src.keys[col].first, src.keys[col].second, Qi(1));
        SymElem img = op.apply(e);
        for (const auto& [key, v] : img) {
            auto it = dst.index.find(key);
            if (it == dst.index.end())
                throw std::logic_error("sym_block_matrix: image leaves the target basis");
            m.at(it->second, static_cast<int>(col)) = v;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Anticommutator residuals (exact zero checks on whole blocks)

inline bool anticommutator_vanishes(const DMode& d, const DpOperator& dp, const TwistFrame& frame,
                                    const std::vector<std::uint32_t>& letters, int qmax,
                                    int lmax) {
    for (int q = 0; q <= qmax; ++q)
        for (int l = 0; l <= lmax; ++l) {
            LambdaBasis src = lambda_basis(frame, q, letters, l);
            for (const auto& key : src.keys) {
                LambdaElem e;
                lambda_add(e, key.first, key.second, Qi(1));
                LambdaElem x = d.apply(dp.apply(e));
                for (const auto& [k2, v] : dp.apply(d.apply(e)))
                    lambda_add(x, k2.first, k2.second, v);
                if (!x.empty()) return false;
            }
        }
    return true;
}

inline bool anticommutator_vanishes(const DMode& d, const DhatOperator& dh, int n,
                                    const std::vector<std::uint32_t>& letters, int qmax,
                                    int lmax) {
    for (int q = 0; q <= qmax; ++q)
        for (int l = 0; l <= lmax; ++l) {
            SymBasis src = sym_basis(n, q, letters, l);
            for (const auto& key : src.keys) {
                SymElem e;
                sym_add(e, key.first, key.second, Qi(1));
                SymElem x = d.apply(dh.apply(e));
                for (const auto& [k2, v] : dh.apply(d.apply(e)))
                    sym_add(x, k2.first, k2.second, v);
                if (!x.empty()) return false;
            }
        }
    return true;
}

// ---------------------------------------------------------------------------
// Laplacians on the untwisted fiber, per mode

struct LaplacianPair {
    // blocks per degree l = 0..dim: operator C^l -> C^l
    std::vector<QiMatrix> delta1, delta2, hat1, hat2;
    Qi closed_form_scalar1, closed_form_scalar2;
    bool delta1_matches_closed_form = false;
    bool delta2_matches_closed_form = false;
    bool hats_vanish = false;
};

// delta_j = -sum_mu (i kappa_mu) iota_{C^{-1}(C_zetaj^mu)}; the compositions
// with d_i reproduce the closed forms evaluated with nabla -> i kappa.
inline LaplacianPair laplacian(const SpinRep& rep, const Bilinear& c, const MultiVector& z1,
                               const MultiVector& z2, const FourierMode& mode, int lmax = -1) {
    if (c.eval(z1, z2).is_zero() && c.eval(z2, z1).is_zero())
        throw std::domain_error("laplacian: degenerate pairing C(zeta1, zeta2) = 0");
    int n = rep.n();
    int dim = rep.dim_delta();
    if (lmax < 0) lmax = dim;
    MultiVector nu1 = mode_cospinor(rep, c, z1, mode);
    MultiVector nu2 = mode_cospinor(rep, c, z2, mode);
    // delta in the first-slot form C^{-1}(delta phi, psi) = C^{-1}(phi, d psi)
    // integrated over the torus (modes pair k with -k, contributing a sign):
    // per mode, delta = (-1)^{s_C + 1} iota by the raised spinor of nu.
    auto delta_apply = [&](const MultiVector& nu, const MultiVector& phi) {
        std::vector<Qi> coords(dim, Qi(0));
        for (const auto& [w, coef] : nu.terms()) coords[w.letters()[0]] = coef;
        std::vector<Qi> eta = rep.coords(c.undualize(rep, coords));
        MultiVector out = interior_by_spinor(eta, phi);
        return c.s_c() == 1 ? out : -out;
    };
    auto compose_blocks = [&](const MultiVector& nu_d, const MultiVector& nu_del,
                              std::vector<QiMatrix>& out) {
        for (int l = 0; l <= lmax; ++l) {
            auto words = subsets_of_size(dim, l);
            QiMatrix blk(static_cast<int>(words.size()), static_cast<int>(words.size()));
            std::map<Word, int> index;
            for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = static_cast<int>(i);
            for (std::size_t col = 0; col < words.size(); ++col) {
                MultiVector phi = MultiVector::basis(dim, words[col]);
                MultiVector r = delta_apply(nu_del, wedge(nu_d, phi)) +
                                wedge(nu_d, delta_apply(nu_del, phi));
                for (const auto& [w, coef] : r.terms()) blk.at(index.at(w), static_cast<int>(col)) = coef;
            }
            out.push_back(blk);
        }
    };
    LaplacianPair out;
    compose_blocks(nu1, nu2, out.delta1);  // Delta_1 = delta_2 d_1 + d_1 delta_2
    compose_blocks(nu2, nu1, out.delta2);
    compose_blocks(nu1, nu1, out.hat1);
    compose_blocks(nu2, nu2, out.hat2);
    // closed forms with R = 0: Delta_1 = (-1)^{s_C+s_Gamma}
    //   sum kappa_mu kappa_nu C(zeta1, Gamma^nu Gamma^mu zeta2) Id
    auto closed = [&](const MultiVector& za, const MultiVector& zb) {
        Qi s(0);
        for (int mu = 1; mu <= n; ++mu) {
            Qi km = mode.kappa(mu);
            if (km.is_zero()) continue;
            for (int nuidx = 1; nuidx <= n; ++nuidx) {
                Qi kn = mode.kappa(nuidx);
                if (kn.is_zero()) continue;
                s += km * kn * c.eval(za, rep.apply_gamma(nuidx, rep.apply_gamma(mu, zb)));
            }
        }
        if ((c.s_c() + c.s_gamma()) % 2 == 1) s = -s;
        return s;
    };
    out.closed_form_scalar1 = closed(z1, z2);
    out.closed_form_scalar2 = closed(z2, z1);
    auto is_scalar = [&](const std::vector<QiMatrix>& blocks, const Qi& scalar) {
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            QiMatrix want = scalar * QiMatrix::identity(blocks[l].rows());
            if (!(blocks[l] == want)) return false;
        }
        return true;
    };
    out.delta1_matches_closed_form = is_scalar(out.delta1, out.closed_form_scalar1);
    out.delta2_matches_closed_form = is_scalar(out.delta2, out.closed_form_scalar2);
    bool hz = true;
    for (const auto& b : out.hat1) hz = hz && b.is_zero();
    for (const auto& b : out.hat2) hz = hz && b.is_zero();
    out.hats_vanish = hz;
    return out;
}

}  // namespace spincoh
