#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hgr/rng.hpp"

namespace hgr {

// Set over a dense key space [0, capacity) with O(1) insert/erase/membership
// and O(1) uniform sampling. Backing order is unspecified and may be permuted
// by sampling.
class IndexedSet {
  public:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    IndexedSet() = default;
    explicit IndexedSet(std::uint64_t capacity) : pos_(capacity, kNone) {}

    std::uint32_t size() const { return static_cast<std::uint32_t>(items_.size()); }
    bool empty() const { return items_.empty(); }
    bool contains(std::uint32_t key) const { return pos_[key] != kNone; }
    std::uint32_t at(std::uint32_t i) const { return items_[i]; }
    const std::vector<std::uint32_t>& items() const { return items_; }

    bool insert(std::uint32_t key) {
        if (pos_[key] != kNone) return false;
        pos_[key] = size();
        items_.push_back(key);
        return true;
    }

    bool erase(std::uint32_t key) {
        const std::uint32_t p = pos_[key];
        if (p == kNone) return false;
        const std::uint32_t last = items_.back();
        items_[p] = last;
        pos_[last] = p;
        items_.pop_back();
        pos_[key] = kNone;
        return true;
    }

    std::uint32_t sample(Rng& rng) const {
        if (items_.empty()) throw std::logic_error("sampling from an empty IndexedSet");
        return items_[rng.uniform_int(items_.size())];
    }

    // Uniform m-subset via partial Fisher-Yates; reorders the backing vector.
    void sample_distinct(std::uint32_t m, Rng& rng, std::vector<std::uint32_t>& out) {
        if (m > size()) throw std::logic_error("subset larger than IndexedSet");
        out.clear();
        for (std::uint32_t i = 0; i < m; ++i) {
            const std::uint32_t j =
                i + static_cast<std::uint32_t>(rng.uniform_int(size() - i));
            std::swap(items_[i], items_[j]);
            pos_[items_[i]] = i;
            pos_[items_[j]] = j;
            out.push_back(items_[i]);
        }
    }

  private:
    std::vector<std::uint32_t> items_;
    std::vector<std::uint32_t> pos_;
};

}  // namespace hgr
