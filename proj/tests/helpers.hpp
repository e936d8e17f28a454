#pragma once

// Conversions between library forms and the oracle's index-list forms.

#include "oracles.hpp"

#include <hk/exterior.hpp>

#include <cmath>

namespace testing {

inline oracle::Form to_oracle(const hk::KForm& f) {
    oracle::Form out;
    f.for_each([&](hk::Mask bits, double c) { out[hk::blade_indices(bits)] = c; });
    return out;
}

inline hk::Mask mask_of(const oracle::Indices& idx) {
    hk::Mask m = 0;
    for (int i : idx) m |= hk::Mask{1} << i;
    return m;
}

/// max |a − b| over the union of supports.
inline double distance(const oracle::Form& a, const oracle::Form& b) {
    double worst = 0.0;
    for (const auto& [k, v] : a) {
        const auto it = b.find(k);
        worst = std::max(worst, std::abs(v - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, v] : b) {
        if (a.find(k) == a.end()) worst = std::max(worst, std::abs(v));
    }
    return worst;
}

inline hk::KForm e(int dim, std::initializer_list<int> idx, double c = 1.0) {
    return hk::KForm::blade(dim, mask_of(oracle::Indices(idx)), c);
}

/// Bitwise equality of coefficients over the whole basis.
inline bool identical(const hk::KForm& a, const hk::KForm& b) {
    return a.dim() == b.dim() && a.degree() == b.degree() && a.dense() == b.dense();
}

}  // namespace testing
