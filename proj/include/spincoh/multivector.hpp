// Exterior algebra over an indexed basis, with exact Q(i) coefficients.
// Index words are bit patterns (up to 128 letters); the same container holds
// spinors in Lambda^*(U_C), forms in Lambda^*(V_C) and fiber elements in
// Lambda^*(Delta^*).
#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spincoh/rational.hpp"

namespace spincoh {

// Ascending index word encoded as a 128-bit set; letter indices are 0-based.
struct Word {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    static Word empty() { return Word{}; }
    static Word single(int i) { Word w; w.set(i); return w; }
    static Word from_mask(std::uint64_t m) { return Word{m, 0}; }

    bool test(int i) const {
        return i < 64 ? (lo >> i) & 1 : (hi >> (i - 64)) & 1;
    }
    void set(int i) {
        if (i < 64) lo |= (1ULL << i);
        else hi |= (1ULL << (i - 64));
    }
    void clear(int i) {
        if (i < 64) lo &= ~(1ULL << i);
        else hi &= ~(1ULL << (i - 64));
    }
    int count() const { return std::popcount(lo) + std::popcount(hi); }
    bool empty_set() const { return lo == 0 && hi == 0; }

    int count_below(int i) const {
        if (i <= 0) return 0;
        if (i <= 64) {
            std::uint64_t mask = (i == 64) ? ~0ULL : ((1ULL << i) - 1);
            return std::popcount(lo & mask);
        }
        std::uint64_t mask = (i == 128) ? ~0ULL : ((1ULL << (i - 64)) - 1);
        return std::popcount(lo) + std::popcount(hi & mask);
    }
    bool disjoint(const Word& o) const { return (lo & o.lo) == 0 && (hi & o.hi) == 0; }
    bool subset_of(const Word& o) const {
        return (lo & ~o.lo) == 0 && (hi & ~o.hi) == 0;
    }
    Word unite(const Word& o) const { return Word{lo | o.lo, hi | o.hi}; }
    Word minus(const Word& o) const { return Word{lo & ~o.lo, hi & ~o.hi}; }
    Word intersect(const Word& o) const { return Word{lo & o.lo, hi & o.hi}; }

    std::vector<int> letters() const {
        std::vector<int> out;
        out.reserve(count());
        std::uint64_t a = lo;
        while (a) {
            int b = std::countr_zero(a);
            out.push_back(b);
            a &= a - 1;
        }
        std::uint64_t b64 = hi;
        while (b64) {
            int b = std::countr_zero(b64);
            out.push_back(b + 64);
            b64 &= b64 - 1;
        }
        return out;
    }

    friend bool operator==(const Word& a, const Word& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
    friend bool operator<(const Word& a, const Word& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    }
};

// Parity of the shuffle merging two disjoint ascending words (number of pairs
// (a in x, b in y) with a > b).
inline int shuffle_sign(const Word& x, const Word& y) {
    int inv = 0;
    for (int b : y.letters()) inv += x.count() - x.count_below(b + 1);
    return inv % 2 == 0 ? 1 : -1;
}

class MultiVector {
public:
    MultiVector() : n_(0) {}
    explicit MultiVector(int ground_dim) : n_(ground_dim) {
        if (ground_dim < 0 || ground_dim > 128)
            throw std::invalid_argument("MultiVector: ground_dim out of range");
    }

    static MultiVector scalar(int ground_dim, const Qi& c) {
        MultiVector v(ground_dim);
        v.add_term(Word::empty(), c);
        return v;
    }
    static MultiVector basis(int ground_dim, const Word& w, const Qi& c = Qi(1)) {
        MultiVector v(ground_dim);
        v.add_term(w, c);
        return v;
    }
    // e_{i1} ^ e_{i2} ^ ... with 1-based ascending indices.
    static MultiVector basis_letters(int ground_dim, std::initializer_list<int> idx,
                                     const Qi& c = Qi(1)) {
        Word w;
        int prev = 0;
        for (int i : idx) {
            if (i <= prev || i > ground_dim)
                throw std::invalid_argument("MultiVector: bad basis letters");
            w.set(i - 1);
            prev = i;
        }
        return basis(ground_dim, w, c);
    }

    int ground_dim() const { return n_; }
    const std::map<Word, Qi>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Qi coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Qi(0) : it->second;
    }

    void add_term(const Word& w, const Qi& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool is_homogeneous(int* degree = nullptr) const {
        int deg = -1;
        for (const auto& [w, c] : terms_) {
            int d = w.count();
            if (deg == -1) deg = d;
            else if (deg != d) return false;
        }
        if (degree) *degree = (deg == -1 ? 0 : deg);
        return true;
    }

    MultiVector grade(int d) const {
        MultiVector out(n_);
        for (const auto& [w, c] : terms_)
            if (w.count() == d) out.add_term(w, c);
        return out;
    }
    int max_degree() const {
        int d = 0;
        for (const auto& [w, c] : terms_) d = std::max(d, w.count());
        return d;
    }

    MultiVector operator-() const {
        MultiVector out(n_);
        for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
        return out;
    }
    MultiVector& operator+=(const MultiVector& o) {
        check_dim(o);
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    MultiVector& operator-=(const MultiVector& o) {
        check_dim(o);
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
    friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
    friend MultiVector operator*(const Qi& c, const MultiVector& v) {
        MultiVector out(v.n_);
        if (c.is_zero()) return out;
        for (const auto& [w, k] : v.terms_) out.terms_.emplace(w, c * k);
        return out;
    }
    friend bool operator==(const MultiVector& a, const MultiVector& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiVector& a, const MultiVector& b) { return !(a == b); }

    // Exterior product; sign is the parity of transpositions into ascending
    // order (shuffle parity for disjoint words).
    friend MultiVector wedge(const MultiVector& a, const MultiVector& b) {
        a.check_dim(b);
        MultiVector out(a.n_);
        for (const auto& [wa, ca] : a.terms_) {
            for (const auto& [wb, cb] : b.terms_) {
                if (!wa.disjoint(wb)) continue;
                Qi c = ca * cb;
                if (shuffle_sign(wa, wb) < 0) c = -c;
                out.add_term(wa.unite(wb), c);
            }
        }
        return out;
    }

    // Interior product e_i -| x, the <,>-adjoint of wedging by e_i (1-based i).
    friend MultiVector contract(int i, const MultiVector& x) {
        if (i < 1 || i > x.n_)
            throw std::out_of_range("contract: index out of range");
        MultiVector out(x.n_);
        for (const auto& [w, c] : x.terms_) {
            if (!w.test(i - 1)) continue;
            Word w2 = w;
            w2.clear(i - 1);
            Qi cc = c;
            if (w.count_below(i - 1) % 2 == 1) cc = -cc;
            out.add_term(w2, cc);
        }
        return out;
    }

    // Interior product by a complex vector v = sum v_i e_i (coordinates 1-based).
    friend MultiVector contract_vec(const std::vector<Qi>& v, const MultiVector& x) {
        MultiVector out(x.n_);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) out += v[i] * contract(static_cast<int>(i) + 1, x);
        return out;
    }

    // Coefficient-wise complex conjugation (basis words are real).
    MultiVector conj() const {
        MultiVector out(n_);
        for (const auto& [w, c] : terms_) out.terms_.emplace(w, c.conj());
        return out;
    }

    // Hermitian inner product, conjugate-linear in the first argument
    // (extension of eq-style <z,w> = sum conj(z) w to the exterior algebra).
    friend Qi herm_inner(const MultiVector& a, const MultiVector& b) {
        a.check_dim(b);
        Qi s(0);
        const auto& small = a.terms_.size() <= b.terms_.size() ? a.terms_ : b.terms_;
        const bool first_small = a.terms_.size() <= b.terms_.size();
        for (const auto& [w, c] : small) {
            auto it = (first_small ? b.terms_ : a.terms_).find(w);
            if (it == (first_small ? b.terms_ : a.terms_).end()) continue;
            s += first_small ? c.conj() * it->second : it->second.conj() * c;
        }
        return s;
    }

    // "1,3,4" -> word {1,3,4}; "" is the empty word.
    static std::string word_key(const Word& w) {
        std::string s;
        for (int b : w.letters()) {
            if (!s.empty()) s += ",";
            s += std::to_string(b + 1);
        }
        return s;
    }
    static Word parse_word_key(const std::string& key, int ground_dim) {
        Word w;
        if (key.empty()) return w;
        std::stringstream ss(key);
        std::string part;
        int prev = 0;
        while (std::getline(ss, part, ',')) {
            int v = std::stoi(part);
            if (v <= prev || v > ground_dim)
                throw std::invalid_argument("MultiVector: bad word key '" + key + "'");
            w.set(v - 1);
            prev = v;
        }
        return w;
    }

private:
    void check_dim(const MultiVector& o) const {
        if (n_ != o.n_)
            throw std::invalid_argument("MultiVector: mismatched ground_dim");
    }

    int n_;
    std::map<Word, Qi> terms_;
};

}  // namespace spincoh
