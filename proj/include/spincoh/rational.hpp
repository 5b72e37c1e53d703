// Exact scalars in Q(i), the ground field for everything in this library.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spincoh {

// Gaussian rational a + b*i with a, b exact rationals (GMP-backed, always
// canonicalized: positive denominators, gcd-reduced, zero stored as 0/1).
class Qi {
public:
    Qi() : re_(0), im_(0) {}
    Qi(long v) : re_(v), im_(0) {}
    Qi(const mpq_class& re) : re_(re), im_(0) { canon(); }
    Qi(const mpq_class& re, const mpq_class& im) : re_(re), im_(im) { canon(); }
    Qi(long num, long den) : re_(num, den), im_(0) {
        if (den == 0) throw std::invalid_argument("Qi: zero denominator");
        canon();
    }

    static Qi i() { return Qi(mpq_class(0), mpq_class(1)); }
    static Qi i_pow(long e) {
        long r = ((e % 4) + 4) % 4;
        switch (r) {
            case 0: return Qi(1);
            case 1: return Qi::i();
            case 2: return Qi(-1);
            default: return Qi(mpq_class(0), mpq_class(-1));
        }
    }
    static Qi sign_pow(long e) { return (e % 2 == 0) ? Qi(1) : Qi(-1); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    mpz_class re_num() const { return re_.get_num(); }
    mpz_class re_den() const { return re_.get_den(); }
    mpz_class im_num() const { return im_.get_num(); }
    mpz_class im_den() const { return im_.get_den(); }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    Qi conj() const { return Qi(re_, -im_); }

    // |z|^2 = z * conj(z), a nonnegative rational.
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }

    // max(|re|, |im|); exact stand-in for a magnitude when reporting residuals.
    mpq_class maxabs() const {
        mpq_class a = abs(re_), b = abs(im_);
        return a > b ? a : b;
    }

    Qi operator-() const { return Qi(-re_, -im_); }

    Qi& operator+=(const Qi& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Qi& operator-=(const Qi& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Qi& operator*=(const Qi& o) {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = r;
        im_ = m;
        return *this;
    }

    friend Qi operator+(Qi a, const Qi& b) { return a += b; }
    friend Qi operator-(Qi a, const Qi& b) { return a -= b; }
    friend Qi operator*(Qi a, const Qi& b) { return a *= b; }

    Qi inverse() const {
        if (is_zero()) throw std::domain_error("Qi: division by zero");
        mpq_class n = norm2();
        return Qi(re_ / n, -im_ / n);
    }
    friend Qi operator/(const Qi& a, const Qi& b) { return a * b.inverse(); }
    Qi& operator/=(const Qi& o) { return *this = *this / o; }

    friend bool operator==(const Qi& a, const Qi& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Qi& a, const Qi& b) { return !(a == b); }

    // Serialized as "a/b+c/d*i" with zero parts omitted ("0" for zero).
    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        if (sgn(re_) != 0) s += frac_str(re_);
        if (sgn(im_) != 0) {
            if (!s.empty() && sgn(im_) > 0) s += "+";
            s += frac_str(im_) + "*i";
        }
        return s;
    }

    static Qi parse(const std::string& text) {
        if (text.empty()) throw std::invalid_argument("Qi: empty string");
        if (text == "0") return Qi(0);
        // Split into at most two signed fraction tokens; a trailing "*i"
        // marks the imaginary one.
        Qi out(0);
        size_t pos = 0;
        while (pos < text.size()) {
            size_t start = pos;
            if (text[pos] == '+' || text[pos] == '-') ++pos;
            while (pos < text.size() && text[pos] != '+' && text[pos] != '-') ++pos;
            std::string tok = text.substr(start, pos - start);
            bool imag = false;
            if (tok.size() >= 2 && tok.compare(tok.size() - 2, 2, "*i") == 0) {
                imag = true;
                tok = tok.substr(0, tok.size() - 2);
            } else if (!tok.empty() && tok.back() == 'i') {
                imag = true;
                tok.pop_back();
                if (!tok.empty() && tok.back() == '*') tok.pop_back();
                if (tok.empty() || tok == "+") tok = "1";
                else if (tok == "-") tok = "-1";
            }
            if (tok.empty()) throw std::invalid_argument("Qi: bad token in '" + text + "'");
            if (tok[0] == '+') tok = tok.substr(1);
            mpq_class q;
            if (q.set_str(tok, 10) != 0)
                throw std::invalid_argument("Qi: bad rational '" + tok + "'");
            q.canonicalize();
            if (sgn(q.get_den()) <= 0) throw std::invalid_argument("Qi: bad denominator");
            if (imag) out.im_ += q;
            else out.re_ += q;
        }
        out.canon();
        return out;
    }

private:
    static std::string frac_str(const mpq_class& q) {
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    void canon() { re_.canonicalize(); im_.canonicalize(); }

    mpq_class re_;
    mpq_class im_;
};

// Deterministic PRNG (splitmix64) so every sampled sweep is reproducible
// from a published seed, independent of platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    // uniform in [lo, hi]
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    Qi small_qi(long mag = 3) {
        return Qi(range(-mag, mag)) + Qi::i() * Qi(range(-mag, mag));
    }
    Qi small_rational(long mag = 3) { return Qi(range(-mag, mag)); }

private:
    std::uint64_t state_;
};

}  // namespace spincoh
