#include "pdw/grsk.hpp"

#include "pdw/error.hpp"

#include <algorithm>
#include <cmath>

namespace pdw {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("grsk: ") + what + " must be positive");
}

void require_length(const std::vector<double>& a, const std::vector<double>& b, int n) {
    if (n < 1) throw DomainError("grsk: n must be at least 1");
    if (static_cast<int>(a.size()) < n || static_cast<int>(b.size()) < n) {
        throw DomainError("grsk: fewer increments than steps");
    }
}

}  // namespace

GrskState grsk_step(const GrskState& s, double a_inc, double b_inc) {
    require_positive(s.x, "x");
    require_positive(s.y, "y");
    require_positive(s.z, "z");
    require_positive(a_inc, "a increment");
    require_positive(b_inc, "b increment");
    GrskState n;
    n.x = s.x * b_inc;
    n.y = (s.y + n.x) * a_inc;
    n.z = s.z / s.x * (n.x * s.y / (n.x + s.y));
    return n;
}

std::vector<GrskState> grsk_run(const GrskState& initial, const std::vector<double>& a_incs,
                                const std::vector<double>& b_incs) {
    const std::size_t n = std::min(a_incs.size(), b_incs.size());
    std::vector<GrskState> out{initial};
    out.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) out.push_back(grsk_step(out.back(), a_incs[k], b_incs[k]));
    return out;
}

double grsk_my_identity_check(const GrskState& initial, const std::vector<double>& a_incs,
                              const std::vector<double>& b_incs, int n) {
    require_length(a_incs, b_incs, n);
    const auto states = grsk_run(initial, {a_incs.begin(), a_incs.begin() + n}, {b_incs.begin(), b_incs.begin() + n});

    // Walk side, built only from the increments and the initial state.
    std::vector<double> r(n + 1);
    r[0] = initial.x / initial.z;
    for (int i = 1; i <= n; ++i) {
        const double a_prev = i == 1 ? initial.y / initial.x : a_incs[i - 2];
        r[i] = r[i - 1] * b_incs[i - 1] / a_prev;
    }
    double worst = 0.0;
    double a_sum = r[0];
    for (int k = 1; k <= n; ++k) {
        const double a_next = a_sum + r[k];
        const double rhs = r[k] / (a_sum * a_next);
        const double lhs = states[k].z / states[k - 1].y;
        worst = std::max(worst, std::abs(lhs - rhs));
        a_sum = a_next;
    }
    return worst;
}

double grsk_product_identity_check(const GrskState& initial, const std::vector<double>& a_incs,
                                   const std::vector<double>& b_incs, int n) {
    require_length(a_incs, b_incs, n);
    const auto states = grsk_run(initial, {a_incs.begin(), a_incs.begin() + n}, {b_incs.begin(), b_incs.begin() + n});
    double prod = initial.y * initial.z;
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        prod *= a_incs[k - 1] * b_incs[k - 1];
        const double yz = states[k].y * states[k].z;
        worst = std::max(worst, std::abs(yz - prod) / std::abs(prod));
    }
    return worst;
}

}  // namespace pdw
