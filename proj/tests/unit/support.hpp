#pragma once

#include "pdw/matcore.hpp"
#include "pdw/rng.hpp"

#include <cmath>

namespace pdw::test {

// Random SPD matrix g^T g + eps I.
inline PosDef random_posdef(int d, RngStream& rng, double eps = 0.1) {
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal(0.0, 1.0);
    return PosDef::from_matrix(g.transpose() * g + eps * Mat::Identity(d, d));
}

inline double rel_frob(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

inline Mat mat2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace pdw::test
