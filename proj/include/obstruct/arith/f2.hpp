#pragma once

// Linear algebra over the two-element field, bit-packed in 64-bit words.
// Dimensions here are tiny (a few dozen); clarity over block tricks.

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace obstruct {

class F2Vector {
public:
    F2Vector() = default;
    explicit F2Vector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const {
        assert(i < n_);
        return (w_[i >> 6] >> (i & 63)) & 1;
    }
    void set(std::size_t i, bool b) {
        assert(i < n_);
        if (b) w_[i >> 6] |= (std::uint64_t(1) << (i & 63));
        else w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }
    void flip(std::size_t i) {
        assert(i < n_);
        w_[i >> 6] ^= (std::uint64_t(1) << (i & 63));
    }
    bool is_zero() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }
    F2Vector& operator^=(const F2Vector& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend F2Vector operator^(F2Vector a, const F2Vector& b) {
        a ^= b;
        return a;
    }
    bool dot(const F2Vector& o) const {
        assert(n_ == o.n_);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) acc ^= (w_[i] & o.w_[i]);
        return __builtin_parityll(acc);
    }
    bool operator==(const F2Vector& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator<(const F2Vector& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        return w_ < o.w_;
    }

    // concatenation (direct sums of local spaces)
    static F2Vector concat(const std::vector<F2Vector>& parts) {
        std::size_t n = 0;
        for (const auto& p : parts) n += p.size();
        F2Vector r(n);
        std::size_t off = 0;
        for (const auto& p : parts) {
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p.get(i)) r.set(off + i, true);
            off += p.size();
        }
        return r;
    }
    F2Vector slice(std::size_t lo, std::size_t len) const {
        F2Vector r(len);
        for (std::size_t i = 0; i < len; ++i)
            if (get(lo + i)) r.set(i, true);
        return r;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < n_; ++i) s += get(i) ? '1' : '0';
        return s;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, F2Vector(cols)) {}
    explicit F2Matrix(std::vector<F2Vector> rows) : rows_(std::move(rows)) {
        cols_ = rows_.empty() ? 0 : rows_[0].size();
        for (const auto& r : rows_) assert(r.size() == cols_);
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const F2Vector& row(std::size_t i) const { return rows_[i]; }
    F2Vector& row(std::size_t i) { return rows_[i]; }
    bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
    void set(std::size_t i, std::size_t j, bool b) { rows_[i].set(j, b); }
    void append_row(F2Vector v) {
        assert(rows_.empty() ? true : v.size() == cols_);
        if (rows_.empty()) cols_ = v.size();
        rows_.push_back(std::move(v));
    }

    F2Vector mul(const F2Vector& v) const {
        F2Vector r(rows());
        for (std::size_t i = 0; i < rows(); ++i)
            if (rows_[i].dot(v)) r.set(i, true);
        return r;
    }

    // in-place row reduction to reduced row echelon form; returns pivot columns
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows(); ++c) {
            std::size_t sel = r;
            while (sel < rows() && !rows_[sel].get(c)) ++sel;
            if (sel == rows()) continue;
            std::swap(rows_[r], rows_[sel]);
            for (std::size_t i = 0; i < rows(); ++i)
                if (i != r && rows_[i].get(c)) rows_[i] ^= rows_[r];
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const {
        F2Matrix m = *this;
        return m.rref().size();
    }

private:
    std::size_t cols_ = 0;
    std::vector<F2Vector> rows_;
};

// Basis of the null space {v : Mv = 0}, by Gaussian elimination.
inline std::vector<F2Vector> f2_kernel(const F2Matrix& M) {
    F2Matrix m = M;
    std::vector<std::size_t> pivots = m.rref();
    std::size_t n = M.cols();
    std::vector<long> pivot_of_col(n, -1);
    for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of_col[pivots[i]] = static_cast<long>(i);
    std::vector<F2Vector> basis;
    for (std::size_t c = 0; c < n; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        F2Vector v(n);
        v.set(c, true);
        for (std::size_t j = 0; j < pivots.size(); ++j)
            if (m.row(j).get(c)) v.set(pivots[j], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Row-span helper: reduce v against a row-reduced basis (rows with known
// pivot columns); used for quotient-space canonical forms.
struct F2Span {
    std::vector<F2Vector> rows;       // reduced rows
    std::vector<std::size_t> pivots;  // pivot column per row

    void build(const std::vector<F2Vector>& gens) {
        rows.clear();
        pivots.clear();
        for (const auto& g : gens) add(g);
    }
    // returns true if v was independent (and got added)
    bool add(F2Vector v) {
        reduce(v);
        if (v.is_zero()) return false;
        std::size_t p = 0;
        while (!v.get(p)) ++p;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].get(p)) rows[i] ^= v;
        rows.push_back(std::move(v));
        pivots.push_back(p);
        return true;
    }
    void reduce(F2Vector& v) const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (v.get(pivots[i])) v ^= rows[i];
    }
    bool contains(F2Vector v) const {
        reduce(v);
        return v.is_zero();
    }
    std::size_t rank() const { return rows.size(); }
};

}  // namespace obstruct
