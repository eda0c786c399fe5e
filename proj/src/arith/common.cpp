#include "hmf/common.hpp"

namespace hmf {

std::vector<std::pair<Integer, int>> factor_integer(Integer n) {
    require(n != 0, "factor_integer: zero");
    if (n < 0) n = -n;
    std::vector<std::pair<Integer, int>> out;
    for (Integer p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

Integer squarefree_part(const Integer& n) {
    Integer out = n < 0 ? -1 : 1;
    for (const auto& [p, e] : factor_integer(n))
        if (e % 2 == 1) out *= p;
    return out;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    require(m > 0, "inverse_mod: modulus must be positive");
    if (m == 1) return 0;
    std::int64_t old_r = mod_floor(a, m), old_x = 1;
    std::int64_t cur_r = m, cur_x = 0;
    while (cur_r != 0) {
        std::int64_t q = old_r / cur_r;
        std::int64_t t = old_r - q * cur_r;
        old_r = cur_r;
        cur_r = t;
        t = old_x - q * cur_x;
        old_x = cur_x;
        cur_x = t;
    }
    require(old_r == 1, "inverse_mod: not invertible");
    return mod_floor(old_x, m);
}

}  // namespace hmf
