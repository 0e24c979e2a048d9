#pragma once

#include <cstdint>
#include <vector>

namespace mtplan::detail {

// Monotone priority queue for small non-negative integer edge weights
// (Dial's buckets). Pushed keys must lie in [current, current + max_weight].
class BucketQueue {
public:
    explicit BucketQueue(int max_weight) : buckets_(static_cast<std::size_t>(max_weight) + 1) {}

    void push(long key, std::int32_t v)
    {
        buckets_[static_cast<std::size_t>(key) % buckets_.size()].push_back(v);
        ++size_;
    }

    bool empty() const { return size_ == 0; }

    // Smallest key currently stored; queue must be non-empty.
    long top_key()
    {
        while (buckets_[static_cast<std::size_t>(current_) % buckets_.size()].empty())
            ++current_;
        return current_;
    }

    std::int32_t pop(long& key)
    {
        key = top_key();
        auto& b = buckets_[static_cast<std::size_t>(current_) % buckets_.size()];
        const std::int32_t v = b.back();
        b.pop_back();
        --size_;
        return v;
    }

    void clear()
    {
        for (auto& b : buckets_)
            b.clear();
        size_ = 0;
        current_ = 0;
    }

private:
    std::vector<std::vector<std::int32_t>> buckets_;
    std::size_t size_ = 0;
    long current_ = 0;
};

} // namespace mtplan::detail
