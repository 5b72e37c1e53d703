// Exact cohomology of finite graded complexes, double complexes with the
// regrading that makes d and D act vertically/horizontally, spectral
// sequences computed page by page from the column filtration, and the
// comparison theorems: torus spin cohomology, d2 = dbar, d0 = K -| del,
// the tau-map de Rham identifications, Spencer vanishing, and the
// Calabi-Yau mode.
#pragma once

#include <functional>
#include <map>
#include <set>

#include "spincoh/spincomplex.hpp"

namespace spincoh {

// ---------------------------------------------------------------------------
// Finite complexes

class FiniteComplex {
public:
    // spaces 0..len-1 with differentials d_i: C^i -> C^{i+1}
    FiniteComplex(std::vector<int> dims, std::vector<QiMatrix> diffs)
        : dims_(std::move(dims)), diffs_(std::move(diffs)) {
        if (diffs_.size() + 1 != dims_.size())
            throw std::invalid_argument("FiniteComplex: need one differential per adjacent pair");
        for (std::size_t i = 0; i < diffs_.size(); ++i) {
            if (diffs_[i].cols() != dims_[i] || diffs_[i].rows() != dims_[i + 1])
                throw std::invalid_argument("FiniteComplex: block shape mismatch at degree " +
                                            std::to_string(i));
        }
        for (std::size_t i = 0; i + 1 < diffs_.size(); ++i) {
            if (!(diffs_[i + 1] * diffs_[i]).is_zero())
                throw std::invalid_argument("FiniteComplex: not a complex, d.d != 0 at block " +
                                            std::to_string(i));
        }
    }

    int length() const { return static_cast<int>(dims_.size()); }
    int dim(int i) const { return dims_[i]; }
    const QiMatrix& diff(int i) const { return diffs_[i]; }

    std::vector<int> cohomology_dims() const {
        std::vector<int> h(dims_.size(), 0);
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            int rank_in = (i == 0) ? 0 : diffs_[i - 1].rank();
            int rank_out = (i + 1 == dims_.size()) ? 0 : diffs_[i].rank();
            h[i] = dims_[i] - rank_out - rank_in;
        }
        return h;
    }

    // Canonical representatives: kernel vectors reduced modulo the image and
    // brought to reduced echelon form.
    std::vector<QiMatrix> representatives() const {
        std::vector<QiMatrix> reps;
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            QiMatrix ker = (i + 1 == dims_.size()) ? QiMatrix::identity(dims_[i])
                                                   : diffs_[i].kernel_basis();
            QiMatrix img(0, dims_[i]);
            if (i > 0) {
                Subspace im(dims_[i], diffs_[i - 1].transpose());
                img = im.basis();
            }
            // stack image then kernel; echelon; rows beyond the image rank
            // span the cohomology in canonical form
            QiMatrix stacked(img.rows() + ker.rows(), dims_[i]);
            for (int r = 0; r < img.rows(); ++r)
                for (int c = 0; c < dims_[i]; ++c) stacked.at(r, c) = img.at(r, c);
            for (int r = 0; r < ker.rows(); ++r)
                for (int c = 0; c < dims_[i]; ++c) stacked.at(img.rows() + r, c) = ker.at(r, c);
            Subspace all(dims_[i], stacked);
            // representatives: complement of img inside all
            int hdim = all.dim() - img.rows();
            QiMatrix out(hdim, dims_[i]);
            // choose kernel rows independent modulo img, reduce against img
            Subspace acc(dims_[i], img);
            int taken = 0;
            for (int r = 0; r < ker.rows() && taken < hdim; ++r) {
                std::vector<Qi> v(dims_[i]);
                for (int c = 0; c < dims_[i]; ++c) v[c] = ker.at(r, c);
                if (acc.contains(v)) continue;
                QiMatrix addrow(1, dims_[i]);
                for (int c = 0; c < dims_[i]; ++c) addrow.at(0, c) = v[c];
                QiMatrix st(acc.dim() + 1, dims_[i]);
                for (int rr = 0; rr < acc.dim(); ++rr)
                    for (int c = 0; c < dims_[i]; ++c) st.at(rr, c) = acc.basis().at(rr, c);
                for (int c = 0; c < dims_[i]; ++c) st.at(acc.dim(), c) = v[c];
                acc = Subspace(dims_[i], st);
                for (int c = 0; c < dims_[i]; ++c) out.at(taken, c) = v[c];
                ++taken;
            }
            out.rref();
            reps.push_back(out);
        }
        return reps;
    }

    long euler_characteristic() const {
        long from_spaces = 0, from_h = 0;
        std::vector<int> h = cohomology_dims();
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            long s = (i % 2 == 0) ? 1 : -1;
            from_spaces += s * dims_[i];
            from_h += s * h[i];
        }
        if (from_spaces != from_h)
            throw std::logic_error("euler_characteristic: rank-nullity bookkeeping failed");
        return from_h;
    }

private:
    std::vector<int> dims_;
    std::vector<QiMatrix> diffs_;
};

// ---------------------------------------------------------------------------
// Double complexes and spectral sequences

class DoubleComplex {
public:
    void set_space(int p, int q, int dim) {
        if (dim > 0) dims_[{p, q}] = dim;
    }
    void set_horizontal(int p, int q, const QiMatrix& m) {
        if (m.rows() > 0 && m.cols() > 0 && !m.is_zero()) hmaps_[{p, q}] = m;
    }
    void set_vertical(int p, int q, const QiMatrix& m) {
        if (m.rows() > 0 && m.cols() > 0 && !m.is_zero()) vmaps_[{p, q}] = m;
    }

    int dim(int p, int q) const {
        auto it = dims_.find({p, q});
        return it == dims_.end() ? 0 : it->second;
    }
    const std::map<std::pair<int, int>, int>& spaces() const { return dims_; }

    QiMatrix horizontal(int p, int q) const {
        auto it = hmaps_.find({p, q});
        if (it != hmaps_.end()) return it->second;
        return QiMatrix(dim(p + 1, q), dim(p, q));
    }
    QiMatrix vertical(int p, int q) const {
        auto it = vmaps_.find({p, q});
        if (it != vmaps_.end()) return it->second;
        return QiMatrix(dim(p, q + 1), dim(p, q));
    }

    void validate() const {
        for (const auto& [pq, d] : dims_) {
            auto [p, q] = pq;
            QiMatrix hh = horizontal(p + 1, q) * horizontal(p, q);
            if (!hh.is_zero()) throw std::invalid_argument("DoubleComplex: horizontal^2 != 0");
            QiMatrix vv = vertical(p, q + 1) * vertical(p, q);
            if (!vv.is_zero()) throw std::invalid_argument("DoubleComplex: vertical^2 != 0");
            QiMatrix anti = vertical(p + 1, q) * horizontal(p, q) +
                            horizontal(p, q + 1) * vertical(p, q);
            if (!anti.is_zero())
                throw std::invalid_argument(
                    "DoubleComplex: differentials fail to anticommute at (" +
                    std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }

    // Total complex over total degree n = p + q, blocks ordered by p.
    struct Total {
        std::vector<int> degrees;                       // the populated total degrees
        std::map<int, std::vector<std::pair<int, int>>> blocks;  // per degree, ordered
        std::map<int, std::map<std::pair<int, int>, int>> offsets;
        std::map<int, int> dims;
        std::map<int, QiMatrix> d;  // T^n -> T^{n+1}
    };

    Total total() const {
        Total t;
        std::set<int> degs;
        for (const auto& [pq, dim] : dims_) degs.insert(pq.first + pq.second);
        for (int n : degs) t.degrees.push_back(n);
        for (int n : t.degrees) {
            int off = 0;
            for (const auto& [pq, dim] : dims_) {
                if (pq.first + pq.second != n) continue;
                t.blocks[n].push_back(pq);
                t.offsets[n][pq] = off;
                off += dim;
            }
            t.dims[n] = off;
        }
        for (int n : t.degrees) {
            int rows = t.dims.count(n + 1) ? t.dims.at(n + 1) : 0;
            QiMatrix m(rows, t.dims.at(n));
            for (const auto& pq : t.blocks.at(n)) {
                auto [p, q] = pq;
                int src = t.offsets.at(n).at(pq);
                QiMatrix h = horizontal(p, q);
                if (h.rows() > 0 && t.offsets.count(n + 1) &&
                    t.offsets.at(n + 1).count({p + 1, q})) {
                    int dst = t.offsets.at(n + 1).at({p + 1, q});
                    for (int r = 0; r < h.rows(); ++r)
                        for (int c = 0; c < h.cols(); ++c) m.at(dst + r, src + c) = h.at(r, c);
                }
                QiMatrix v = vertical(p, q);
                if (v.rows() > 0 && t.offsets.count(n + 1) &&
                    t.offsets.at(n + 1).count({p, q + 1})) {
                    int dst = t.offsets.at(n + 1).at({p, q + 1});
                    for (int r = 0; r < v.rows(); ++r)
                        for (int c = 0; c < v.cols(); ++c) m.at(dst + r, src + c) = v.at(r, c);
                }
            }
            t.d[n] = m;
        }
        return t;
    }

    std::map<int, int> total_cohomology() const {
        Total t = total();
        std::map<int, int> h;
        for (int n : t.degrees) {
            int rank_out = t.d.at(n).rank();
            int rank_in = 0;
            if (t.d.count(n - 1)) rank_in = t.d.at(n - 1).rank();
            h[n] = t.dims.at(n) - rank_out - rank_in;
        }
        return h;
    }

private:
    std::map<std::pair<int, int>, int> dims_;
    std::map<std::pair<int, int>, QiMatrix> hmaps_;  // from (p,q) to (p+1,q)
    std::map<std::pair<int, int>, QiMatrix> vmaps_;  // from (p,q) to (p,q+1)
};

struct SpectralResult {
    // pages[r] holds dim E_r^{p,q}; page index starts at r = 1
    std::vector<std::map<std::pair<int, int>, int>> pages;
    std::vector<std::map<std::pair<int, int>, int>> dr_ranks;  // rank of d_r out of (p,q)
    std::map<std::pair<int, int>, int> einf;
    std::map<int, int> einf_totals;
    std::map<int, int> total_cohomology;
    bool oracle_match = false;
    bool euler_preserved = true;
    bool monotone = true;
};

// Page-by-page computation from the column filtration F^p = (sum of columns
// >= p); exact subspace arithmetic throughout.
inline SpectralResult spectral_sequence(const DoubleComplex& dc, int max_extra_pages = 2) {
    dc.validate();
    DoubleComplex::Total t = dc.total();
    SpectralResult out;
    if (t.degrees.empty()) {
        out.oracle_match = true;
        return out;
    }
    int pmin = 1 << 30, pmax = -(1 << 30);
    for (const auto& [pq, d] : dc.spaces()) {
        pmin = std::min(pmin, pq.first);
        pmax = std::max(pmax, pq.first);
    }
    int rmax = (pmax - pmin) + 1 + max_extra_pages;
    int nmin = t.degrees.front(), nmax = t.degrees.back();

    auto coord_subspace = [&](int n, int pfloor) {
        // F^{pfloor} T^n as a coordinate subspace
        if (!t.dims.count(n) || t.dims.at(n) == 0) return Subspace(t.dims.count(n) ? t.dims.at(n) : 0);
        int dim = t.dims.at(n);
        std::vector<int> coords;
        for (const auto& pq : t.blocks.at(n)) {
            if (pq.first < pfloor) continue;
            int off = t.offsets.at(n).at(pq);
            for (int i = 0; i < dc.dim(pq.first, pq.second); ++i) coords.push_back(off + i);
        }
        QiMatrix rows(static_cast<int>(coords.size()), dim);
        for (std::size_t r = 0; r < coords.size(); ++r) rows.at(static_cast<int>(r), coords[r]) = Qi(1);
        return Subspace(dim, rows);
    };

    auto dmat = [&](int n) -> QiMatrix {
        if (t.d.count(n)) return t.d.at(n);
        return QiMatrix(t.dims.count(n + 1) ? t.dims.at(n + 1) : 0, t.dims.count(n) ? t.dims.at(n) : 0);
    };

    // A_r^p(n) = { x in F^p T^n : d x in F^{p+r} T^{n+1} }; r = -1 means F^p.
    std::map<std::tuple<int, int, int>, Subspace> acache;
    std::function<const Subspace&(int, int, int)> A = [&](int r, int p,
                                                          int n) -> const Subspace& {
        auto key = std::make_tuple(r, p, n);
        auto it = acache.find(key);
        if (it != acache.end()) return it->second;
        Subspace result(t.dims.count(n) ? t.dims.at(n) : 0);
        if (r < 0) {
            result = coord_subspace(n, p);
        } else {
            Subspace fp = coord_subspace(n, p);
            // constrain: the components of dx in columns < p + r vanish
            QiMatrix d = dmat(n);
            int tdim = d.rows();
            std::vector<int> badrows;
            if (t.dims.count(n + 1)) {
                for (const auto& pq : t.blocks.at(n + 1)) {
                    if (pq.first >= p + r) continue;
                    int off = t.offsets.at(n + 1).at(pq);
                    for (int i = 0; i < dc.dim(pq.first, pq.second); ++i) badrows.push_back(off + i);
                }
            }
            // rows of the constraint on the basis of F^p
            QiMatrix cons(static_cast<int>(badrows.size()), fp.dim());
            for (int col = 0; col < fp.dim(); ++col) {
                std::vector<Qi> v(fp.ambient());
                for (int c = 0; c < fp.ambient(); ++c) v[c] = fp.basis().at(col, c);
                std::vector<Qi> dv = d.apply(v);
                for (std::size_t rr = 0; rr < badrows.size(); ++rr)
                    cons.at(static_cast<int>(rr), col) = dv[badrows[rr]];
            }
            QiMatrix ker = cons.kernel_basis();
            QiMatrix rows(ker.rows(), fp.ambient());
            for (int r2 = 0; r2 < ker.rows(); ++r2) {
                std::vector<Qi> acc(fp.ambient(), Qi(0));
                for (int c = 0; c < fp.dim(); ++c) {
                    if (ker.at(r2, c).is_zero()) continue;
                    for (int cc = 0; cc < fp.ambient(); ++cc)
                        acc[cc] += ker.at(r2, c) * fp.basis().at(c, cc);
                }
                for (int cc = 0; cc < fp.ambient(); ++cc) rows.at(r2, cc) = acc[cc];
            }
            result = Subspace(fp.ambient(), rows);
        }
        return acache.emplace(key, result).first->second;
    };

    auto denominator = [&](int r, int p, int n) {
        Subspace z = A(r - 1, p + 1, n);
        Subspace b = A(r - 1, p - r + 1, n - 1).image_under(dmat(n - 1));
        return z.sum(b);
    };

    long euler_ref = 0;
    bool euler_ref_set = false;
    std::map<std::pair<int, int>, int> prev_page;
    for (int r = 1; r <= rmax; ++r) {
        std::map<std::pair<int, int>, int> page;
        std::map<std::pair<int, int>, int> ranks;
        for (const auto& [pq, dim] : dc.spaces()) {
            auto [p, q] = pq;
            int n = p + q;
            Subspace num = A(r, p, n);
            Subspace den = denominator(r, p, n);
            // the denominator sits inside the numerator by construction
            if (num.sum(den).dim() != num.dim())
                throw std::logic_error("spectral_sequence: denominator not inside numerator");
            int e = num.dim() - den.dim();
            if (e > 0) page[pq] = e;
            // rank of d_r out of (p,q)
            Subspace img = num.image_under(dmat(n));
            Subspace dt = denominator(r, p + r, n + 1);
            int rank = img.sum(dt).dim() - dt.dim();
            if (rank > 0) ranks[pq] = rank;
        }
        // monotonicity and Euler bookkeeping
        long euler = 0;
        for (const auto& [pq, e] : page) {
            long s = ((pq.first + pq.second) % 2 == 0) ? 1 : -1;
            euler += s * e;
            if (r > 1) {
                auto it = prev_page.find(pq);
                int prev = it == prev_page.end() ? 0 : it->second;
                if (e > prev) out.monotone = false;
            }
        }
        if (!euler_ref_set) {
            euler_ref = euler;
            euler_ref_set = true;
        } else if (euler != euler_ref) {
            out.euler_preserved = false;
        }
        // consistency: dim E_{r+1} = dim E_r - rank_out - rank_in (checked on
        // the next iteration through monotonicity; here record)
        out.pages.push_back(page);
        out.dr_ranks.push_back(ranks);
        prev_page = page;
    }
    out.einf = out.pages.back();
    for (const auto& [pq, e] : out.einf) out.einf_totals[pq.first + pq.second] += e;
    out.total_cohomology = dc.total_cohomology();
    out.oracle_match = true;
    for (const auto& [n, h] : out.total_cohomology)
        if (h != (out.einf_totals.count(n) ? out.einf_totals.at(n) : 0)) out.oracle_match = false;
    for (const auto& [n, e] : out.einf_totals)
        if (e != (out.total_cohomology.count(n) ? out.total_cohomology.at(n) : 0))
            out.oracle_match = false;
    return out;
}

// ---------------------------------------------------------------------------
// Torus spin cohomology

struct TorusCohomology {
    std::vector<int> dims;            // per cospinor degree
    bool nonzero_modes_exact = true;  // every nonzero mode contributed zero
    long euler = 0;
};

inline std::vector<std::vector<long>> modes_box(int n, int kmax) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur(n, -kmax);
    while (true) {
        out.push_back(cur);
        int i = 0;
        while (i < n && cur[i] == kmax) {
            cur[i] = -kmax;
            ++i;
        }
        if (i == n) break;
        ++cur[i];
    }
    return out;
}

// Cohomology of (Lambda^*(carrier letters), nu(k) ^ .) summed over the mode
// box; by Koszul exactness every nonzero frequency contributes nothing. The
// exactness of each nonzero mode is re-verified by full rank computation for
// up to `rank_verify_budget` modes (all of them when negative); beyond the
// budget it follows from the contraction homotopy {nu ^ , iota_v} = nu(v) Id
// with nu(v) != 0, the Koszul lemma tested elsewhere.
inline TorusCohomology torus_cohomology(const SpinRep& rep, const Bilinear& c,
                                        const MultiVector& zeta, CospinorCarrier cc, int kmax,
                                        const std::vector<Qi>& offset = {},
                                        int rank_verify_budget = -1) {
    validate_d_carrier(rep, c, zeta, cc);
    auto letters = carrier_letters(rep, cc);
    int nl = static_cast<int>(letters.size());
    TorusCohomology out;
    out.dims.assign(nl + 1, 0);
    // precompute the per-mu cospinors once
    std::vector<MultiVector> cz;
    for (int mu = 1; mu <= rep.n(); ++mu)
        cz.push_back(cospinor_to_fiber(czeta_mu(rep, c, zeta, mu)));
    // local index of the carrier letters
    std::map<int, int> local;
    for (int i = 0; i < nl; ++i) local[static_cast<int>(letters[i])] = i;
    int verified = 0;
    for (const auto& k : modes_box(rep.n(), kmax)) {
        MultiVector nu(rep.dim_delta());
        bool zero_mode = true;
        for (int mu = 1; mu <= rep.n(); ++mu) {
            Qi kap = Qi(k[mu - 1]);
            if (!offset.empty()) kap += offset[mu - 1];
            if (kap.is_zero()) continue;
            zero_mode = false;
            nu += (Qi::i() * kap) * cz[mu - 1];
        }
        if (zero_mode) {
            // d = 0: cohomology is the whole graded fiber
            for (int l = 0; l <= nl; ++l)
                out.dims[l] += static_cast<int>(subsets_of_size(nl, l).size());
            continue;
        }
        if (nu.is_zero()) {
            // a nonzero frequency with a vanishing symbol would break the
            // Koszul argument; never happens for the invariant spinors
            out.nonzero_modes_exact = false;
            for (int l = 0; l <= nl; ++l)
                out.dims[l] += static_cast<int>(subsets_of_size(nl, l).size());
            continue;
        }
        if (rank_verify_budget >= 0 && verified >= rank_verify_budget) continue;
        ++verified;
        // nu as a vector over the carrier letters
        std::vector<Qi> nv(nl, Qi(0));
        for (const auto& [w, coef] : nu.terms()) nv[local.at(w.letters()[0])] = coef;
        // ranks of the wedge operator per degree
        std::vector<int> ranks(nl + 1, 0);
        for (int l = 0; l < nl; ++l) {
            auto src = subsets_of_size(nl, l);
            auto dst = subsets_of_size(nl, l + 1);
            std::map<Word, int> di;
            for (std::size_t i = 0; i < dst.size(); ++i) di[dst[i]] = static_cast<int>(i);
            QiMatrix m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
            for (std::size_t col = 0; col < src.size(); ++col) {
                for (int b = 0; b < nl; ++b) {
                    if (nv[b].is_zero() || src[col].test(b)) continue;
                    Word w = src[col];
                    Qi coef = (w.count_below(b) % 2 == 0) ? nv[b] : -nv[b];
                    w.set(b);
                    m.at(di.at(w), static_cast<int>(col)) = coef;
                }
            }
            ranks[l + 1] = m.rank();
        }
        for (int l = 0; l <= nl; ++l) {
            int dim = static_cast<int>(subsets_of_size(nl, l).size());
            int rank_out = (l < nl) ? ranks[l + 1] : 0;
            int rank_in = ranks[l];
            int h = dim - rank_out - rank_in;
            out.dims[l] += h;
            if (h != 0) out.nonzero_modes_exact = false;
        }
    }
    for (std::size_t l = 0; l < out.dims.size(); ++l)
        out.euler += (l % 2 == 0 ? 1 : -1) * out.dims[l];
    return out;
}

// Flat-torus Dolbeault numbers h^{0,p} computed from the dbar Koszul complex
// per mode (the independent side of the structural comparison).
inline std::vector<int> dolbeault_h0(int m, int kmax) {
    std::vector<int> h(m + 1, 0);
    for (const auto& k : modes_box(2 * m, kmax)) {
        std::vector<Qi> mu(m, Qi(0));
        bool zero = true;
        for (int j = 0; j < m; ++j) {
            mu[j] = Qi(1, 2) * Qi::i() * (Qi(k[j]) + Qi::i() * Qi(k[j + m]));
            if (!mu[j].is_zero()) zero = false;
        }
        if (zero) {
            for (int p = 0; p <= m; ++p) h[p] += static_cast<int>(subsets_of_size(m, p).size());
            continue;
        }
        std::vector<int> ranks(m + 2, 0);
        for (int p = 0; p < m; ++p) {
            auto src = subsets_of_size(m, p);
            auto dst = subsets_of_size(m, p + 1);
            std::map<Word, int> di;
            for (std::size_t i = 0; i < dst.size(); ++i) di[dst[i]] = static_cast<int>(i);
            QiMatrix mm(static_cast<int>(dst.size()), static_cast<int>(src.size()));
            for (std::size_t col = 0; col < src.size(); ++col)
                for (int b = 0; b < m; ++b) {
                    if (mu[b].is_zero() || src[col].test(b)) continue;
                    Word w = src[col];
                    Qi coef = (w.count_below(b) % 2 == 0) ? mu[b] : -mu[b];
                    w.set(b);
                    mm.at(di.at(w), static_cast<int>(col)) = coef;
                }
            ranks[p + 1] = mm.rank();
        }
        for (int p = 0; p <= m; ++p) {
            int dim = static_cast<int>(subsets_of_size(m, p).size());
            h[p] += dim - ranks[p + 1] - ranks[p];
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Classical identifications

struct IdentificationReport {
    bool residual_zero = true;       // on the identified blocks, all modes
    bool constant_consistent = true; // one constant across modes and blocks
    Qi measured_constant;            // the proportionality lambda'
    std::string detail;
};

// d2 = dbar (times a measured constant) on the torus: the mode cospinor of
// zeta2 must live on the Lambda^{0,1} letters with components proportional
// to the dbar symbol; the wedge extension then matches on every block.
inline IdentificationReport identify_dolbeault(const SpinRep& rep, const Bilinear& c, int kmax,
                                               const std::vector<Qi>& offset = {}) {
    int m = rep.m();
    auto s = invariant_spinors(HolonomyGroup::SU, 2 * m);
    const MultiVector& zeta2 = s.spinors[1];
    IdentificationReport out;
    bool have_const = false;
    for (const auto& k : modes_box(2 * m, kmax)) {
        FourierMode mode;
        for (int mu = 0; mu < 2 * m; ++mu) {
            mode.k.push_back(Qi(k[mu]));
            mode.a.push_back(offset.empty() ? Qi(0) : offset[mu]);
        }
        if (mode.zero_frequency(2 * m)) continue;
        MultiVector nu = mode_cospinor(rep, c, zeta2, mode);
        // the mode cospinor must stay on the singleton letters (Lambda^{0,1})
        for (const auto& [w, coef] : nu.terms()) {
            if (std::popcount(static_cast<unsigned>(w.letters()[0])) != 1) {
                out.residual_zero = false;
                out.detail = "mode cospinor leaves the Lambda^{0,1} block";
            }
        }
        // dbar symbol per mode: (i/2)(kappa_j + i kappa_{j+m}) on dzbar^j
        for (int j = 0; j < m; ++j) {
            Qi coef = nu.coeff(Word::single(1 << j));
            Qi symbol = Qi(1, 2) * Qi::i() * (mode.kappa(j + 1) + Qi::i() * mode.kappa(j + m + 1));
            if (symbol.is_zero()) {
                if (!coef.is_zero()) out.residual_zero = false;
                continue;
            }
            Qi ratio = coef / symbol;
            if (!have_const) {
                out.measured_constant = ratio;
                have_const = true;
            } else if (ratio != out.measured_constant) {
                out.constant_consistent = false;
            }
        }
    }
    out.residual_zero = out.residual_zero && have_const && out.constant_consistent;
    return out;
}

// d0 = K -| del on the Lambda^{0,1} block for the Sp(2) spinor omega at n=8.
inline IdentificationReport identify_hyperkahler(const SpinRep& rep, const Bilinear& c, int kmax) {
    if (rep.n() != 8) throw std::invalid_argument("identify_hyperkahler: needs n = 8");
    int m = 4;
    auto s = invariant_spinors(HolonomyGroup::Sp, 8);
    const MultiVector& omega = s.spinors[2];
    // K from <v, K w> = omega(v, w) on the first four coordinates
    QiMatrix kmat(m, m);
    kmat.at(0, 1) = Qi(1);
    kmat.at(1, 0) = Qi(-1);
    kmat.at(2, 3) = Qi(1);
    kmat.at(3, 2) = Qi(-1);
    IdentificationReport out;
    bool have_const = false;
    for (const auto& k : modes_box(8, kmax)) {
        FourierMode mode;
        for (int mu = 0; mu < 8; ++mu) mode.k.push_back(Qi(k[mu]));
        mode.a.assign(8, Qi(0));
        if (mode.zero_frequency(8)) continue;
        MultiVector nu = mode_cospinor(rep, c, omega, mode);
        // classical symbol: tau_k = sum_{k'} (sum_i K^i_{k'} p_i) dzbar^{k'}
        // with p_i = (i/2)(kappa_i - i kappa_{i+4}) the del components
        std::vector<Qi> target(m, Qi(0));
        for (int kp = 0; kp < m; ++kp)
            for (int i = 0; i < m; ++i) {
                Qi p = Qi(1, 2) * Qi::i() * (mode.kappa(i + 1) - Qi::i() * mode.kappa(i + 5));
                target[kp] += kmat.at(i, kp) * p;
            }
        // singleton components of nu (the Lambda^{0,1} block of the output)
        for (int j = 0; j < m; ++j) {
            int letter = 1 << j;
            Qi coef = nu.coeff(Word::single(letter));
            Qi sym = target[j];
            if (sym.is_zero()) {
                if (!coef.is_zero()) out.residual_zero = false;
                continue;
            }
            Qi ratio = coef / sym;
            if (!have_const) {
                out.measured_constant = ratio;
                have_const = true;
            } else if (ratio != out.measured_constant) {
                out.constant_consistent = false;
            }
        }
    }
    out.residual_zero = out.residual_zero && have_const && out.constant_consistent;
    return out;
}

struct DeRhamReport {
    bool intertwines = true;   // transported d equals the de Rham operator
    bool bijective = false;    // the tau-type letter map has full rank
    std::vector<int> h_dims;   // summed cohomology per degree
};

// Spin(7): Psi(e^mu) = C_zeta^mu extends to an isomorphism Lambda^*(R^8) ->
// C_+ under which d becomes the exterior derivative per mode.
inline DeRhamReport identify_spin7(const SpinRep& rep, const Bilinear& c, int kmax) {
    if (rep.n() != 8) throw std::invalid_argument("identify_spin7: needs n = 8");
    MultiVector zeta = invariant_spinors(HolonomyGroup::Spin7, 8).spinors[0];
    auto letters = carrier_letters(rep, CospinorCarrier::Plus);
    int nl = static_cast<int>(letters.size());
    DeRhamReport out;
    // letter map: C_zeta^mu expressed over the carrier letters
    QiMatrix phi(nl, 8);
    std::map<int, int> local;
    for (int i = 0; i < nl; ++i) local[static_cast<int>(letters[i])] = i;
    for (int mu = 1; mu <= 8; ++mu) {
        MultiVector cz = cospinor_to_fiber(czeta_mu(rep, c, zeta, mu));
        if (!supported_on(cz, letters)) throw std::logic_error("identify_spin7: wrong chirality");
        for (const auto& [w, coef] : cz.terms()) phi.at(local.at(w.letters()[0]), mu - 1) = coef;
    }
    out.bijective = (phi.rank() == 8);
    // transported d at sample modes equals wedging by Psi(i sum k_mu e^mu);
    // verified by comparing nu-letter vectors
    out.intertwines = true;
    for (const auto& k : modes_box(8, kmax)) {
        std::vector<Qi> de_rham(8, Qi(0));
        bool zero = true;
        for (int mu = 0; mu < 8; ++mu) {
            de_rham[mu] = Qi::i() * Qi(k[mu]);
            if (!de_rham[mu].is_zero()) zero = false;
        }
        if (zero) continue;
        FourierMode mode;
        for (int mu = 0; mu < 8; ++mu) mode.k.push_back(Qi(k[mu]));
        mode.a.assign(8, Qi(0));
        MultiVector nu = mode_cospinor(rep, c, zeta, mode);
        std::vector<Qi> vnu = phi.apply(de_rham);
        for (int i = 0; i < nl; ++i) {
            Qi got = nu.coeff(Word::single(static_cast<int>(letters[i])));
            if (got != vnu[i]) out.intertwines = false;
        }
    }
    // summed cohomology per degree over the box (only the zero mode counts;
    // a seeded sample of nonzero modes is fully rank-verified)
    TorusCohomology tc = torus_cohomology(rep, c, zeta, CospinorCarrier::Plus, 1, {}, 16);
    out.h_dims = tc.dims;
    return out;
}

// G2: the seven cospinors C_zeta^mu plus one completion letter xi identify
// C^l with Lambda^l + Lambda^{l-1}; d transports to (d_dR, -d_dR) per mode.
struct G2Report {
    bool basis_complete = false;
    bool intertwines = true;
    std::vector<int> h_dims;            // summed over modes
    std::vector<int> expected_h_dims;   // C(7,l) + C(7,l-1)
};

inline G2Report identify_g2(const SpinRep& g2rep, const SpinRep& parent, const Bilinear& c,
                            int kmax) {
    if (g2rep.n() != 7) throw std::invalid_argument("identify_g2: needs the n = 7 variant");
    MultiVector zeta = invariant_spinors(HolonomyGroup::G2, 7).spinors[0];
    auto letters = carrier_letters(parent, CospinorCarrier::Minus);
    int nl = static_cast<int>(letters.size());
    std::map<int, int> local;
    for (int i = 0; i < nl; ++i) local[static_cast<int>(letters[i])] = i;
    G2Report out;
    // the seven cospinor letters
    QiMatrix phi(nl, 8);
    for (int mu = 1; mu <= 7; ++mu) {
        MultiVector cz = cospinor_to_fiber(czeta_mu(g2rep, c, zeta, mu));
        if (!supported_on(cz, letters)) throw std::logic_error("identify_g2: wrong chirality");
        for (const auto& [w, coef] : cz.terms()) phi.at(local.at(w.letters()[0]), mu - 1) = coef;
    }
    // completion letter: the dualized zeta, falling back to a unit vector
    {
        std::vector<Qi> xi = c.dualize(parent, zeta);
        for (int i = 0; i < nl; ++i) phi.at(i, 7) = xi[letters[i]];
        if (phi.rank() < 8) {
            for (int i = 0; i < nl; ++i) phi.at(i, 7) = Qi(0);
            for (int try_letter = 0; try_letter < nl && phi.rank() < 8; ++try_letter) {
                for (int i = 0; i < nl; ++i) phi.at(i, 7) = (i == try_letter) ? Qi(1) : Qi(0);
            }
        }
    }
    out.basis_complete = (phi.rank() == 8);
    // intertwining: nu(k) must equal phi applied to (i k, 0) exactly
    for (const auto& k : modes_box(7, kmax)) {
        std::vector<Qi> de_rham(8, Qi(0));
        bool zero = true;
        for (int mu = 0; mu < 7; ++mu) {
            de_rham[mu] = Qi::i() * Qi(k[mu]);
            if (!de_rham[mu].is_zero()) zero = false;
        }
        if (zero) continue;
        FourierMode mode;
        for (int mu = 0; mu < 7; ++mu) mode.k.push_back(Qi(k[mu]));
        mode.a.assign(7, Qi(0));
        MultiVector nu = mode_cospinor(g2rep, c, zeta, mode);
        std::vector<Qi> vnu = phi.apply(de_rham);
        for (int i = 0; i < nl; ++i) {
            Qi got = nu.coeff(Word::single(static_cast<int>(letters[i])));
            if (got != vnu[i]) out.intertwines = false;
        }
    }
    TorusCohomology tc = torus_cohomology(g2rep, c, zeta, CospinorCarrier::Minus, 1, {}, 16);
    out.h_dims = tc.dims;
    for (int l = 0; l <= nl; ++l) {
        long c7l = (l <= 7) ? static_cast<long>(subsets_of_size(7, l).size()) : 0;
        long c7l1 = (l >= 1 && l - 1 <= 7) ? static_cast<long>(subsets_of_size(7, l - 1).size()) : 0;
        out.expected_h_dims.push_back(static_cast<int>(c7l + c7l1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spencer cohomology of Dhat

struct SpencerResult {
    bool tau_invertible = false;
    int tau_rank = 0;
    // H^{p,q} dims keyed by (sym degree p, cospinor degree q)
    std::map<std::pair<int, int>, int> h;
    // kernel dims of Dhat per (p, q) for p > 0, with the predicted delta2
    std::map<std::pair<int, int>, std::pair<long, long>> kernel_vs_delta2;
    bool matches_prediction = true;
};

inline long spencer_delta1(int n, int p, int q) {
    // n (n+1) ... (n+p-1) (n-1) ... (n-q) / ((p+q) (p-1)! q!)
    long num = 1;
    for (int t = 0; t < p; ++t) num *= (n + t);
    for (int t = 1; t <= q; ++t) num *= (n - t);
    long den = p + q;
    for (int t = 2; t <= p - 1; ++t) den *= t;
    for (int t = 2; t <= q; ++t) den *= t;
    return num / den;
}
inline long spencer_delta2(int n, int p, int q) {
    // n (n+1) ... (n+p) (n-1) ... (n-q+1) / ((p+q) p! (q-1)!)
    long num = 1;
    for (int t = 0; t <= p; ++t) num *= (n + t);
    for (int t = 1; t <= q - 1; ++t) num *= (n - t);
    long den = p + q;
    for (int t = 2; t <= p; ++t) den *= t;
    for (int t = 2; t <= q - 1; ++t) den *= t;
    return num / den;
}

// Core Spencer computation for an arbitrary cospinor family over a fiber
// letter space of dimension `fiber_ground` (n cospinors, one per direction).
inline SpencerResult spencer_core(int n, int fiber_ground,
                                  const std::vector<MultiVector>& cospinors, int qmax) {
    SpencerResult out;
    // the letter matrix v -> sum v_mu c^mu must be invertible
    QiMatrix lm(fiber_ground, n);
    for (int mu = 0; mu < n; ++mu)
        for (const auto& [w, coef] : cospinors[mu].terms()) lm.at(w.letters()[0], mu) = coef;
    out.tau_rank = lm.rank();
    out.tau_invertible = (fiber_ground == n && out.tau_rank == n);
    if (!out.tau_invertible)
        throw std::invalid_argument("spencer_cohomology: C_zeta is not an isomorphism (rank " +
                                    std::to_string(out.tau_rank) + " of " + std::to_string(n) +
                                    ")");
    int dim = fiber_ground;
    DhatOperator dh(fiber_ground, cospinors);
    std::vector<std::uint32_t> letters;
    for (int i = 0; i < fiber_ground; ++i) letters.push_back(static_cast<std::uint32_t>(i));
    // anti-diagonals s = p + q; Dhat: (p, q) -> (p-1, q+1)
    for (int s = 0; s <= qmax + dim; ++s) {
        // complex indexed by q ascending: Sym^{s-q} (x) C^q
        std::vector<int> dims;
        std::vector<QiMatrix> diffs;
        std::vector<SymBasis> bases;
        int qlo = std::max(0, s - qmax), qhi = std::min(s, dim);
        if (qlo > qhi) continue;
        for (int q = qlo; q <= qhi; ++q) {
            bases.push_back(sym_basis(n, s - q, letters, q));
            dims.push_back(static_cast<int>(bases.back().keys.size()));
        }
        for (std::size_t i = 0; i + 1 < bases.size(); ++i)
            diffs.push_back(sym_block_matrix(dh, bases[i], bases[i + 1]));
        if (dims.size() < 1) continue;
        FiniteComplex cx(dims, diffs);
        std::vector<int> h = cx.cohomology_dims();
        for (int q = qlo; q <= qhi; ++q) {
            int p = s - q;
            // truncation: the first spot of a truncated diagonal (p = qmax
            // boundary) has an artificially large kernel; skip spots whose
            // incoming map got cut off unless p = 0 diagonal end is genuine
            if (p > 0 && q == qlo && s > qmax) continue;
            if (p == 0) {
                // the Sym^0 edge is not quotiented: H^{0,q} is the kernel of
                // Dhat there (the whole of C^q), which is the statement
                // H_{Dhat}^* = C of the vanishing proposition
                out.h[{p, q}] = dims[q - qlo];
                continue;
            }
            out.h[{p, q}] = h[q - qlo];
        }
        // kernel dims vs delta2
        for (int q = qlo; q < qhi; ++q) {
            int p = s - q;
            if (p <= 0 || q < 1) continue;
            const QiMatrix& d = diffs[q - qlo];
            long ker = d.cols() - d.rank();
            long pred = spencer_delta2(n, p, q);
            out.kernel_vs_delta2[{p, q}] = {ker, pred};
            if (ker != pred) out.matches_prediction = false;
        }
    }
    return out;
}

inline SpencerResult spencer_cohomology(const SpinRep& rep, const Bilinear& c,
                                        const MultiVector& zeta, int qmax) {
    std::vector<MultiVector> cz;
    for (int mu = 1; mu <= rep.n(); ++mu)
        cz.push_back(cospinor_to_fiber(czeta_mu(rep, c, zeta, mu)));
    return spencer_core(rep.n(), rep.dim_delta(), cz, qmax);
}

// Twisted variant on C(E) = Lambda^*((Delta^chi (x) E)^*) with E = C^2 and a
// parallel section zeta = zeta_1 (x) f_1 + zeta_2 (x) f_2: the letter map is
// an isomorphism whenever W(zeta_1) and W(zeta_2) intersect trivially, which
// same-chirality pure pairs achieve in dimensions where the untwisted map
// cannot be invertible.
inline SpencerResult spencer_twisted_pair(const SpinRep& rep, const Bilinear& c,
                                          const MultiVector& z1, const MultiVector& z2,
                                          int qmax) {
    int n = rep.n();
    int dim = rep.dim_delta();
    // collect the support letters of the two cospinor families
    std::vector<std::vector<Qi>> raw1, raw2;
    for (int mu = 1; mu <= n; ++mu) {
        raw1.push_back(czeta_mu(rep, c, z1, mu));
        raw2.push_back(czeta_mu(rep, c, z2, mu));
    }
    std::set<int> support;
    for (int mu = 0; mu < n; ++mu)
        for (int a = 0; a < dim; ++a)
            if (!raw1[mu][a].is_zero() || !raw2[mu][a].is_zero()) support.insert(a);
    std::vector<int> letters(support.begin(), support.end());
    int ground = 2 * static_cast<int>(letters.size());
    std::map<int, int> local;
    for (std::size_t i = 0; i < letters.size(); ++i) local[letters[i]] = static_cast<int>(i);
    std::vector<MultiVector> cz;
    for (int mu = 0; mu < n; ++mu) {
        MultiVector v(ground);
        for (int a : letters) {
            if (!raw1[mu][a].is_zero()) v.add_term(Word::single(2 * local[a]), raw1[mu][a]);
            if (!raw2[mu][a].is_zero()) v.add_term(Word::single(2 * local[a] + 1), raw2[mu][a]);
        }
        cz.push_back(v);
    }
    return spencer_core(n, ground, cz, qmax);
}

// ---------------------------------------------------------------------------
// Calabi-Yau mode

struct HodgeDiamond {
    int h11 = 0;
    int h21 = 0;
    int h01 = 0;  // nonzero only in reducible examples; the irreducible mode
    int h02 = 0;  // requires both to vanish

    void validate() const {
        if (h11 < 0 || h21 < 0 || h01 < 0 || h02 < 0)
            throw std::invalid_argument("HodgeDiamond: negative entry");
    }
    bool irreducible() const { return h01 == 0 && h02 == 0; }
};

struct Cy3Result {
    std::vector<int> h_total;      // H^0..H^6 of dbar + D
    std::vector<int> h_d2;         // the d2-only groups H^l = h^{0,l} + h^{0,l-1}
    bool d_injective_on_h30 = false;
    bool d_surjective_h11_to_h03 = false;
    int primitive_kernel_dim = -1;
    bool e2_equals_einf = false;
    bool machinery_matches_formula = false;
};

// The abstract Hodge-diamond model: spaces E_1^{p,q} = H^{p,q}_dbar with the
// D maps modeled on the Lefschetz pairing (D kills primitives, pairs the
// Kahler class with the (0,3) generator, and wedges the (3,0) generator to
// Omega ^ Omega).
inline Cy3Result cy3_spin_cohomology(const HodgeDiamond& h) {
    h.validate();
    if (!h.irreducible())
        throw std::invalid_argument("cy3_spin_cohomology: abstract mode expects the "
                                    "irreducible diamond (h01 = h02 = 0)");
    if (h.h11 < 1)
        throw std::invalid_argument("cy3_spin_cohomology: h11 >= 1 required (Kahler class)");
    Cy3Result out;
    // formula dims: (1, 0, h11-1, 2 h21, h11-1, 0, 1)
    out.h_total = {1, 0, h.h11 - 1, 2 * h.h21, h.h11 - 1, 0, 1};
    // d2-only groups via the Euler decomposition h^{0,l} + h^{0,l-1} with
    // h^{0,*} = (1, 0, 0, 1)
    std::vector<int> h0 = {1, 0, 0, 1};
    out.h_d2.assign(5, 0);
    for (int l = 0; l <= 4; ++l) {
        int a = (l <= 3) ? h0[l] : 0;
        int b = (l >= 1 && l - 1 <= 3) ? h0[l - 1] : 0;
        out.h_d2[l] = a + b;
    }
    // abstract double complex in the regraded coordinates (u, v) = (-p, 2p+q)
    DoubleComplex dc;
    std::map<std::pair<int, int>, int> hodge = {
        {{0, 0}, 1},      {{3, 3}, 1},      {{3, 0}, 1},      {{0, 3}, 1},
        {{1, 1}, h.h11},  {{2, 2}, h.h11},  {{2, 1}, h.h21},  {{1, 2}, h.h21}};
    auto regrade = [](int p, int q) { return std::make_pair(-p, 2 * p + q); };
    for (const auto& [pq, dim] : hodge) {
        auto [u, v] = regrade(pq.first, pq.second);
        dc.set_space(u, v, dim);
    }
    // D: (p,q) -> (p-1, q+2): u -> u+1, v -> v: horizontal
    // model: basis of H^{1,1} = {primitives..., Kahler class (last)}
    {
        QiMatrix d30(h.h11, 1);
        d30.at(h.h11 - 1, 0) = Qi(1);  // Omega^Omega lies on the Kahler-power line
        auto [u, v] = regrade(3, 0);
        dc.set_horizontal(u, v, d30);
        QiMatrix d11(1, h.h11);
        d11.at(0, h.h11 - 1) = Qi(1);
        auto [u2, v2] = regrade(1, 1);
        dc.set_horizontal(u2, v2, d11);
        out.d_injective_on_h30 = (d30.rank() == 1);
        out.d_surjective_h11_to_h03 = (d11.rank() == 1);
        out.primitive_kernel_dim = h.h11 - d11.rank();
    }
    SpectralResult sr = spectral_sequence(dc);
    // E2 = Einf: pages from r = 2 onward are all equal
    out.e2_equals_einf = true;
    if (sr.pages.size() >= 2) {
        const auto& e2 = sr.pages[1];
        for (std::size_t r = 2; r < sr.pages.size(); ++r)
            if (sr.pages[r] != e2) out.e2_equals_einf = false;
    }
    out.machinery_matches_formula = sr.oracle_match;
    for (int l = 0; l <= 6; ++l) {
        int got = sr.einf_totals.count(l) ? sr.einf_totals.at(l) : 0;
        if (got != out.h_total[l]) out.machinery_matches_formula = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// T^6 concrete model: (Lambda^{*,0} (x) C_-, d2 + D) for one mode

inline DoubleComplex t6_double_complex(const SpinRep& rep, const Bilinear& c,
                                       const FourierMode& mode) {
    if (rep.n() != 6) throw std::invalid_argument("t6_double_complex: needs n = 6");
    auto s = invariant_spinors(HolonomyGroup::SU, 6);
    TwistFrame frame = TwistFrame::holomorphic(3);
    auto letters = carrier_letters(rep, CospinorCarrier::Minus);
    DMode d = build_d_mode(rep, c, s.spinors[1], mode, CospinorCarrier::Minus);
    DpOperator dp(rep, c, 1, frame, CospinorCarrier::Minus);
    DoubleComplex dc;
    auto regrade = [](int p, int l) { return std::make_pair(-p, l + 2 * p); };
    std::map<std::pair<int, int>, LambdaBasis> bases;
    for (int p = 0; p <= 3; ++p)
        for (int l = 0; l <= 4; ++l) {
            bases[{p, l}] = lambda_basis(frame, p, letters, l);
            auto [u, v] = regrade(p, l);
            dc.set_space(u, v, static_cast<int>(bases[{p, l}].keys.size()));
        }
    for (int p = 0; p <= 3; ++p)
        for (int l = 0; l <= 4; ++l) {
            auto [u, v] = regrade(p, l);
            if (l + 1 <= 4) {
                QiMatrix dm = lambda_block_matrix(d, bases[{p, l}], bases[{p, l + 1}]);
                dc.set_vertical(u, v, dm);
            }
            if (p >= 1 && l + 2 <= 4) {
                QiMatrix dpm = lambda_block_matrix(dp, bases[{p, l}], bases[{p - 1, l + 2}]);
                dc.set_horizontal(u, v, dpm);
            }
        }
    return dc;
}

// ---------------------------------------------------------------------------
// Random double complexes with a Kunneth oracle (test support)

struct RandomComplex {
    FiniteComplex complex;
    std::vector<int> h_dims;
};

inline RandomComplex random_complex(Rng& rng, int length, int maxdim) {
    // dims split as harmonic + boundary-out + boundary-in; conjugated by
    // random unitriangular products so the matrices look generic
    std::vector<int> h(length), bout(length, 0);
    for (int i = 0; i < length; ++i) h[i] = static_cast<int>(rng.below(maxdim));
    for (int i = 0; i + 1 < length; ++i) bout[i] = static_cast<int>(rng.below(maxdim));
    std::vector<int> dims(length);
    for (int i = 0; i < length; ++i)
        dims[i] = h[i] + bout[i] + (i > 0 ? bout[i - 1] : 0);
    auto random_invertible = [&](int nn) {
        QiMatrix l = QiMatrix::identity(nn), u = QiMatrix::identity(nn);
        for (int r = 0; r < nn; ++r)
            for (int cc = 0; cc < r; ++cc) {
                l.at(r, cc) = rng.small_qi(1);
                u.at(cc, r) = rng.small_qi(1);
            }
        return l * u;
    };
    std::vector<QiMatrix> t;
    for (int i = 0; i < length; ++i) t.push_back(random_invertible(dims[i]));
    std::vector<QiMatrix> diffs;
    for (int i = 0; i + 1 < length; ++i) {
        QiMatrix d(dims[i + 1], dims[i]);
        // boundary block: the bout[i] coordinates (offset h[i]) of degree i
        // map to the last bout[i] coordinates of degree i+1
        for (int b = 0; b < bout[i]; ++b)
            d.at(h[i + 1] + bout[i + 1] + b, h[i] + b) = Qi(1);
        auto inv = t[i].inverse();
        diffs.push_back(t[i + 1] * d * *inv);
    }
    return RandomComplex{FiniteComplex(dims, diffs), h};
}

inline DoubleComplex tensor_double_complex(const RandomComplex& a, const RandomComplex& b) {
    DoubleComplex dc;
    int la = a.complex.length(), lb = b.complex.length();
    for (int p = 0; p < la; ++p)
        for (int q = 0; q < lb; ++q) dc.set_space(p, q, a.complex.dim(p) * b.complex.dim(q));
    auto kron = [](const QiMatrix& x, const QiMatrix& y) {
        QiMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < x.cols(); ++c) {
                if (x.at(r, c).is_zero()) continue;
                for (int r2 = 0; r2 < y.rows(); ++r2)
                    for (int c2 = 0; c2 < y.cols(); ++c2)
                        out.at(r * y.rows() + r2, c * y.cols() + c2) = x.at(r, c) * y.at(r2, c2);
            }
        return out;
    };
    for (int p = 0; p < la; ++p)
        for (int q = 0; q < lb; ++q) {
            if (a.complex.dim(p) == 0 || b.complex.dim(q) == 0) continue;
            if (p + 1 < la)
                dc.set_horizontal(p, q, kron(a.complex.diff(p), QiMatrix::identity(b.complex.dim(q))));
            if (q + 1 < lb) {
                QiMatrix v = kron(QiMatrix::identity(a.complex.dim(p)), b.complex.diff(q));
                if (p % 2 == 1) v = -v;
                dc.set_vertical(p, q, v);
            }
        }
    return dc;
}

}  // namespace spincoh
