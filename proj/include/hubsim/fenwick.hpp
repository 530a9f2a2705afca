#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hubsim {

// Fenwick tree over nonnegative doubles, used as the weighted sampler for
// attachment targets: O(log n) point update, prefix sum, and inverse-CDF
// lookup by bitmask descent. Preallocate to the final vertex count and leave
// the inactive suffix at weight zero; zero-weight entries are never selected
// by find() as long as some weight is positive.
class Fenwick {
public:
    Fenwick() = default;
    explicit Fenwick(size_t n) { reset(n); }

    size_t size() const { return n_; }

    void reset(size_t n) {
        n_ = n;
        top_ = 1;
        while (top_ * 2 <= n_) top_ *= 2;
        tree_.assign(n_ + 1, 0.0);
    }

    // O(n) bulk load, replacing the current contents.
    void build_from(const double* w, size_t n) {
        reset(n);
        for (size_t i = 1; i <= n_; ++i) tree_[i] = w[i - 1];
        for (size_t i = 1; i <= n_; ++i) {
            size_t j = i + (i & (~i + 1));
            if (j <= n_) tree_[j] += tree_[i];
        }
    }

    void add(size_t i, double delta) {
        for (size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
    }

    // Sum of entries [0, i).
    double prefix(size_t i) const {
        double s = 0.0;
        for (size_t j = i; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

    double total() const { return prefix(n_); }

    // Smallest i with prefix(i + 1) > x, i.e. the element whose cumulative
    // mass interval contains x. x is clamped into [0, total()); callers must
    // handle an all-zero tree themselves (there is no mass to land in).
    size_t find(double x) const {
        if (n_ == 0) return 0;
        double t = total();
        if (!(x >= 0.0)) x = 0.0;
        if (x >= t) x = std::nextafter(t, 0.0);
        if (x < 0.0) x = 0.0;
        size_t pos = 0;
        for (size_t step = top_; step > 0; step >>= 1) {
            size_t nxt = pos + step;
            if (nxt <= n_ && tree_[nxt] <= x) {
                x -= tree_[nxt];
                pos = nxt;
            }
        }
        return pos < n_ ? pos : n_ - 1;
    }

private:
    std::vector<double> tree_;  // 1-indexed; tree_[0] unused
    size_t n_ = 0;
    size_t top_ = 1;
};

}  // namespace hubsim
