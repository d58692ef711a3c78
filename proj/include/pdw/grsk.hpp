#pragma once

// Two-row geometric RSK dynamics on three positive particles (d = 1).

#include <vector>

namespace pdw {

struct GrskState {
    double x = 1.0;
    double y = 1.0;
    double z = 1.0;
};

// X' = X b,  Y' = (Y + X') a,  Z' = Z / X * X' Y / (X' + Y).
// Throws DomainError on nonpositive inputs.
GrskState grsk_step(const GrskState& s, double a_inc, double b_inc);

// States 0..n for n = min(a_incs.size(), b_incs.size()).
std::vector<GrskState> grsk_run(const GrskState& initial, const std::vector<double>& a_incs,
                                const std::vector<double>& b_incs);

// Runs n steps and compares Z(k)/Y(k-1) with the walk expression
// A(k-1)^{-1} R(k) A(k)^{-1}, R(k) = X(0)/Z(0) prod_{i<=k} b(i)/a(i-1),
// a(0) = Y(0)/X(0). Returns the largest absolute discrepancy over k <= n.
double grsk_my_identity_check(const GrskState& initial, const std::vector<double>& a_incs,
                              const std::vector<double>& b_incs, int n);

// Largest relative discrepancy of Y(k) Z(k) against Y(0) Z(0) prod a(i) b(i).
double grsk_product_identity_check(const GrskState& initial, const std::vector<double>& a_incs,
                                   const std::vector<double>& b_incs, int n);

}  // namespace pdw
