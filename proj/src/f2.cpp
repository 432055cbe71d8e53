#include "motivic/f2.hpp"

#include <algorithm>

namespace mot::f2 {

KernelImage kernel_image(const std::vector<BitVec>& images, std::size_t tdim) {
    KernelImage out;
    out.image = Echelon(tdim, true, images.size());
    for (std::size_t j = 0; j < images.size(); ++j) {
        BitVec tag(images.size());
        tag.set(j);
        if (!out.image.insert(images[j], tag)) out.kernel.push_back(out.image.last_dependency());
    }
    return out;
}

std::size_t rank_dense(const std::vector<BitVec>& rows, std::size_t ncols) {
    Echelon e(ncols);
    for (const auto& r : rows) e.insert(r);
    return e.rank();
}

std::size_t rank_sparse(std::vector<std::vector<std::uint32_t>> rows) {
    // Pivot on the smallest column of each row; rows are kept sorted.
    std::vector<std::vector<std::uint32_t>> by_pivot;
    std::vector<long> slot;
    std::size_t rank = 0;
    auto sym_diff = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> out;
        out.reserve(a.size() + b.size());
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        // Cancel duplicate indices (F2).
        std::vector<std::uint32_t> clean;
        for (std::size_t i = 0; i < row.size();) {
            std::size_t j = i;
            while (j < row.size() && row[j] == row[i]) ++j;
            if ((j - i) % 2) clean.push_back(row[i]);
            i = j;
        }
        while (!clean.empty()) {
            std::uint32_t p = clean.front();
            if (p >= slot.size()) slot.resize(p + 1, -1);
            if (slot[p] < 0) {
                slot[p] = static_cast<long>(by_pivot.size());
                by_pivot.push_back(std::move(clean));
                ++rank;
                break;
            }
            clean = sym_diff(clean, by_pivot[static_cast<std::size_t>(slot[p])]);
        }
    }
    return rank;
}

std::size_t rank(const std::vector<BitVec>& rows, std::size_t ncols) {
    if (ncols < (std::size_t{1} << 14)) return rank_dense(rows, ncols);
    std::vector<std::vector<std::uint32_t>> sparse;
    sparse.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<std::uint32_t> idx;
        for (auto i : r.ones()) idx.push_back(static_cast<std::uint32_t>(i));
        sparse.push_back(std::move(idx));
    }
    return rank_sparse(std::move(sparse));
}

std::optional<BitVec> solve(const std::vector<BitVec>& images, const BitVec& b) {
    Echelon e(b.size(), true, images.size());
    for (std::size_t j = 0; j < images.size(); ++j) {
        BitVec tag(images.size());
        tag.set(j);
        e.insert(images[j], tag);
    }
    BitVec v = b;
    BitVec combo(images.size());
    e.reduce(v, &combo);
    if (v.any()) return std::nullopt;
    return combo;
}

}  // namespace mot::f2
