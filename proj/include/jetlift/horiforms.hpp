#pragma once

#include "jetlift/localfunction.hpp"
#include "jetlift/rng.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace jetlift {

// Horizontal k-form: coefficients against the wedge basis (dx)^eps with
// eps an increasing k-subset of the base axes, stored as a bitmask
// (bit i-1 set = axis i present). Zero components are dropped.
class HorizontalForm {
public:
    HorizontalForm() : dim_(0), degree_(0) {}
    HorizontalForm(int dim, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    bool is_zero() const { return comps_.empty(); }
    const std::map<uint32_t, LocalFunction>& components() const { return comps_; }
    // Zero function when the subset carries no component.
    LocalFunction component(uint32_t mask) const;

    void add_component(uint32_t mask, const LocalFunction& f);

    HorizontalForm operator+(const HorizontalForm& o) const;
    HorizontalForm operator-(const HorizontalForm& o) const;
    HorizontalForm scaled(const Rat& c) const;
    bool operator==(const HorizontalForm& o) const;
    bool operator!=(const HorizontalForm& o) const { return !(*this == o); }

    std::string str() const;

private:
    int dim_;
    int degree_;
    std::map<uint32_t, LocalFunction> comps_;
};

uint32_t full_mask(int dim);
// Number of axes below `axis` already present: the wedge-insertion sign
// of dx^axis into the subset is (-1)^wedge_pos.
int wedge_pos(int axis, uint32_t mask);

// d_H w = sum_i dx^i wedge d/dx^i w; the top degree maps to the zero
// top-degree form.
HorizontalForm dH(const HorizontalForm& w);

// Variational derivative of the coefficient of a top-degree form:
// sum_I (-1)^|I| (d/dx)^I (dL/du_I).
LocalFunction euler(const HorizontalForm& top);

// One-dimensional constructive inverse of dH on exact degree-1 forms by
// integration by parts, descending on the highest jet order. Throws when
// the Euler obstruction is nonzero.
HorizontalForm invert_dH_1d(const HorizontalForm& alpha);

HorizontalForm random_hform(Rng& rng, int dim, int degree,
                            const LfGenParams& p = {});

} // namespace jetlift
