// Dense exact linear algebra over Q(i): echelon forms, ranks, kernels,
// solves, and the subspace calculus used by the spectral-sequence code.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spincoh/rational.hpp"

namespace spincoh {

class QiMatrix {
public:
    QiMatrix() : rows_(0), cols_(0) {}
    QiMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Qi(0)) {}

    static QiMatrix identity(int n) {
        QiMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Qi(1);
        return m;
    }
    static QiMatrix zero(int rows, int cols) { return QiMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Qi& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Qi& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    QiMatrix transpose() const {
        QiMatrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }
    QiMatrix conj() const {
        QiMatrix t(rows_, cols_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t.at(r, c) = at(r, c).conj();
        return t;
    }

    QiMatrix operator-() const {
        QiMatrix t(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) t.a_[k] = -a_[k];
        return t;
    }
    QiMatrix& operator+=(const QiMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    QiMatrix& operator-=(const QiMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    friend QiMatrix operator+(QiMatrix a, const QiMatrix& b) { return a += b; }
    friend QiMatrix operator-(QiMatrix a, const QiMatrix& b) { return a -= b; }
    friend QiMatrix operator*(const Qi& c, const QiMatrix& m) {
        QiMatrix t(m.rows_, m.cols_);
        for (std::size_t k = 0; k < m.a_.size(); ++k) t.a_[k] = c * m.a_[k];
        return t;
    }
    friend QiMatrix operator*(const QiMatrix& a, const QiMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("QiMatrix: shape mismatch");
        QiMatrix t(a.rows_, b.cols_);
        for (int r = 0; r < a.rows_; ++r)
            for (int k = 0; k < a.cols_; ++k) {
                const Qi& v = a.at(r, k);
                if (v.is_zero()) continue;
                for (int c = 0; c < b.cols_; ++c) {
                    const Qi& w = b.at(k, c);
                    if (!w.is_zero()) t.at(r, c) += v * w;
                }
            }
        return t;
    }
    friend bool operator==(const QiMatrix& a, const QiMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::vector<Qi> apply(const std::vector<Qi>& v) const {
        if (static_cast<int>(v.size()) != cols_)
            throw std::invalid_argument("QiMatrix: vector length mismatch");
        std::vector<Qi> out(rows_, Qi(0));
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                if (!at(r, c).is_zero() && !v[c].is_zero()) out[r] += at(r, c) * v[c];
        return out;
    }

    // In-place reduced row echelon form. Returns pivot columns.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int p = -1;
            for (int rr = r; rr < rows_; ++rr)
                if (!at(rr, c).is_zero()) { p = rr; break; }
            if (p < 0) continue;
            swap_rows(p, r);
            Qi inv = at(r, c).inverse();
            for (int cc = c; cc < cols_; ++cc) at(r, cc) *= inv;
            for (int rr = 0; rr < rows_; ++rr) {
                if (rr == r || at(rr, c).is_zero()) continue;
                Qi f = at(rr, c);
                for (int cc = c; cc < cols_; ++cc) at(rr, cc) -= f * at(r, cc);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        QiMatrix m = *this;
        return static_cast<int>(m.rref().size());
    }

    // Basis of the right kernel, as rows of the returned matrix.
    QiMatrix kernel_basis() const {
        QiMatrix m = *this;
        std::vector<int> piv = m.rref();
        std::vector<bool> is_piv(cols_, false);
        for (int c : piv) is_piv[c] = true;
        std::vector<int> free_cols;
        for (int c = 0; c < cols_; ++c)
            if (!is_piv[c]) free_cols.push_back(c);
        QiMatrix ker(static_cast<int>(free_cols.size()), cols_);
        for (std::size_t k = 0; k < free_cols.size(); ++k) {
            int fc = free_cols[k];
            ker.at(static_cast<int>(k), fc) = Qi(1);
            for (std::size_t p = 0; p < piv.size(); ++p)
                ker.at(static_cast<int>(k), piv[p]) = -m.at(static_cast<int>(p), fc);
        }
        return ker;
    }

    // Solve A x = b; returns one solution or nullopt.
    std::optional<std::vector<Qi>> solve(const std::vector<Qi>& b) const {
        if (static_cast<int>(b.size()) != rows_)
            throw std::invalid_argument("QiMatrix: solve shape mismatch");
        QiMatrix aug(rows_, cols_ + 1);
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
            aug.at(r, cols_) = b[r];
        }
        std::vector<int> piv = aug.rref();
        for (int c : piv)
            if (c == cols_) return std::nullopt;
        std::vector<Qi> x(cols_, Qi(0));
        for (std::size_t p = 0; p < piv.size(); ++p) x[piv[p]] = aug.at(static_cast<int>(p), cols_);
        return x;
    }

    std::optional<QiMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        QiMatrix aug(rows_, 2 * cols_);
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
            aug.at(r, cols_ + r) = Qi(1);
        }
        if (static_cast<int>(aug.rref().size()) != rows_) return std::nullopt;
        // pivots must be the leading block for an invertible matrix
        QiMatrix inv(rows_, cols_);
        for (int r = 0; r < rows_; ++r) {
            if (aug.at(r, r).is_zero()) return std::nullopt;
            for (int c = 0; c < cols_; ++c) inv.at(r, c) = aug.at(r, cols_ + c);
        }
        return inv;
    }

private:
    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
    }
    void check_same_shape(const QiMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("QiMatrix: shape mismatch");
    }

    int rows_, cols_;
    std::vector<Qi> a_;
};

// A subspace of Q(i)^n held as a reduced row echelon basis; the canonical
// form makes equality and containment cheap and deterministic.
class Subspace {
public:
    explicit Subspace(int ambient) : ambient_(ambient), basis_(0, ambient) {}
    Subspace(int ambient, const QiMatrix& spanning_rows) : ambient_(ambient) {
        if (spanning_rows.cols() != ambient)
            throw std::invalid_argument("Subspace: ambient mismatch");
        QiMatrix m = spanning_rows;
        std::vector<int> piv = m.rref();
        basis_ = QiMatrix(static_cast<int>(piv.size()), ambient);
        for (int r = 0; r < basis_.rows(); ++r)
            for (int c = 0; c < ambient; ++c) basis_.at(r, c) = m.at(r, c);
    }

    int ambient() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const QiMatrix& basis() const { return basis_; }

    static Subspace full(int ambient) { return Subspace(ambient, QiMatrix::identity(ambient)); }

    Subspace sum(const Subspace& o) const {
        check(o);
        QiMatrix stacked(dim() + o.dim(), ambient_);
        for (int r = 0; r < dim(); ++r)
            for (int c = 0; c < ambient_; ++c) stacked.at(r, c) = basis_.at(r, c);
        for (int r = 0; r < o.dim(); ++r)
            for (int c = 0; c < ambient_; ++c) stacked.at(dim() + r, c) = o.basis_.at(r, c);
        return Subspace(ambient_, stacked);
    }

    bool contains(const std::vector<Qi>& v) const {
        QiMatrix m = basis_.transpose();
        return m.solve(v).has_value();
    }
    bool contains(const Subspace& o) const {
        for (int r = 0; r < o.dim(); ++r) {
            std::vector<Qi> v(ambient_);
            for (int c = 0; c < ambient_; ++c) v[c] = o.basis_.at(r, c);
            if (!contains(v)) return false;
        }
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

    // Image of this subspace under a linear map given by matrix M (columns =
    // ambient coordinates, i.e. y = M x).
    Subspace image_under(const QiMatrix& m) const {
        if (m.cols() != ambient_) throw std::invalid_argument("Subspace: map mismatch");
        QiMatrix rows(dim(), m.rows());
        for (int r = 0; r < dim(); ++r) {
            std::vector<Qi> v(ambient_);
            for (int c = 0; c < ambient_; ++c) v[c] = basis_.at(r, c);
            std::vector<Qi> w = m.apply(v);
            for (int c = 0; c < m.rows(); ++c) rows.at(r, c) = w[c];
        }
        return Subspace(m.rows(), rows);
    }

private:
    void check(const Subspace& o) const {
        if (ambient_ != o.ambient_) throw std::invalid_argument("Subspace: ambient mismatch");
    }

    int ambient_;
    QiMatrix basis_;
};

// dim(U/W) for W <= U (asserted).
inline int quotient_dim(const Subspace& u, const Subspace& w) {
    if (!u.contains(w)) throw std::logic_error("quotient_dim: W not contained in U");
    return u.dim() - w.dim();
}

}  // namespace spincoh
