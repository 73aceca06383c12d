#pragma once

#include <vector>

namespace jetlift {

// Multi-index over the N base directions: a tuple of non-negative integers.
// Axes are 1-based throughout the library, matching the surface syntax.
struct MultiIndex {
    std::vector<int> v;

    MultiIndex() = default;
    explicit MultiIndex(int dim) : v(static_cast<size_t>(dim), 0) {}
    MultiIndex(std::initializer_list<int> init) : v(init) {}

    int dim() const { return static_cast<int>(v.size()); }

    int order() const {
        int s = 0;
        for (int e : v) s += e;
        return s;
    }

    int operator[](int axis) const { return v[static_cast<size_t>(axis - 1)]; }
    int& at(int axis) { return v[static_cast<size_t>(axis - 1)]; }

    // iJ: bump slot i by one.
    MultiIndex raised(int axis) const {
        MultiIndex r = *this;
        r.at(axis) += 1;
        return r;
    }

    bool can_lower(int axis) const { return (*this)[axis] >= 1; }

    // J/i: defined only when the i-th entry is positive.
    MultiIndex lowered(int axis) const {
        MultiIndex r = *this;
        r.at(axis) -= 1;
        return r;
    }

    bool operator==(const MultiIndex& o) const { return v == o.v; }
    bool operator!=(const MultiIndex& o) const { return v != o.v; }
    bool operator<(const MultiIndex& o) const { return v < o.v; }
};

} // namespace jetlift
