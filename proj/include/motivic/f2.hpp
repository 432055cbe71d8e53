// Packed linear algebra over F2.
#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mot::f2 {

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void flip(std::size_t i) { words_[i >> 6] ^= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    BitVec& operator^=(const BitVec& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
        return *this;
    }
    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }
    // Index of the lowest set bit, or -1.
    long first() const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k]) return static_cast<long>(k * 64 + std::countr_zero(words_[k]));
        return -1;
    }
    // Index of the highest set bit, or -1.
    long last() const {
        for (std::size_t k = words_.size(); k-- > 0;)
            if (words_[k]) return static_cast<long>(k * 64 + 63 - std::countl_zero(words_[k]));
        return -1;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }
    std::vector<std::size_t> ones() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < words_.size(); ++k) {
            auto w = words_[k];
            while (w) {
                out.push_back(k * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
        return out;
    }
    bool operator==(const BitVec& o) const { return n_ == o.n_ && words_ == o.words_; }
    std::string str() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Incremental row echelon form. Each stored row has a distinct pivot (its
// lowest set bit) and is reduced against the other stored rows at their
// pivots. Optionally records, for every stored row, which inserted vectors
// it is the sum of.
class Echelon {
public:
    Echelon() = default;
    Echelon(std::size_t dim, bool track = false, std::size_t track_dim = 0)
        : dim_(dim), track_(track), track_dim_(track_dim), pivot_row_(dim, -1) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<BitVec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    const BitVec& combo(std::size_t r) const { return combos_[r]; }
    bool is_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }

    // Reduces v modulo the stored rows; if combo is given it accumulates the
    // stored-row combinations that were added.
    void reduce(BitVec& v, BitVec* combo = nullptr) const {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (v.get(pivots_[r])) {
                v ^= rows_[r];
                if (combo) *combo ^= combos_[r];
            }
        }
    }

    // Inserts v; returns true if it was independent. `tag` is the tracking
    // vector describing v in terms of the caller's inputs.
    bool insert(BitVec v, BitVec tag = {}) {
        if (track_ && tag.size() == 0) tag = BitVec(track_dim_);
        reduce(v, track_ ? &tag : nullptr);
        long p = v.first();
        if (p < 0) {
            last_dependency_ = std::move(tag);
            return false;
        }
        auto pc = static_cast<std::size_t>(p);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (rows_[r].get(pc)) {
                rows_[r] ^= v;
                if (track_) combos_[r] ^= tag;
            }
        }
        pivot_row_[pc] = static_cast<long>(rows_.size());
        rows_.push_back(std::move(v));
        pivots_.push_back(pc);
        if (track_) combos_.push_back(std::move(tag));
        return true;
    }
    // Tracking vector of the last dependent insert (the relation found).
    const BitVec& last_dependency() const { return last_dependency_; }

    bool contains(BitVec v) const {
        reduce(v);
        return v.none();
    }

private:
    std::size_t dim_ = 0;
    bool track_ = false;
    std::size_t track_dim_ = 0;
    std::vector<BitVec> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<BitVec> combos_;
    std::vector<long> pivot_row_;
    BitVec last_dependency_;
};

struct KernelImage {
    std::vector<BitVec> kernel;  // vectors in the source space
    Echelon image;               // echelon form of the image, tracked by source
};

// Given images[j] = A e_j (target dimension tdim), returns a kernel basis and
// the tracked echelon form of the image.
KernelImage kernel_image(const std::vector<BitVec>& images, std::size_t tdim);

std::size_t rank_dense(const std::vector<BitVec>& rows, std::size_t ncols);
// Sparse elimination on rows given as sorted column index lists.
std::size_t rank_sparse(std::vector<std::vector<std::uint32_t>> rows);
// Chooses the sparse path above 2^14 columns.
std::size_t rank(const std::vector<BitVec>& rows, std::size_t ncols);

// Solves A x = b for x given the columns images[j] = A e_j; nullopt if b is
// not in the image.
std::optional<BitVec> solve(const std::vector<BitVec>& images, const BitVec& b);

}  // namespace mot::f2
