#pragma once

#include "hmf/p1.hpp"
#include "hmf/quat/order.hpp"

#include <vector>

namespace hmf::quat {

using p1::Matrix2;

// Ring map O -> M_2(Z_F/N) for N coprime to the discriminant. Built one
// prime power at a time from a Hensel-lifted idempotent and glued by CRT.
// Every construction is verified (multiplicativity on basis pairs, det = nrd,
// surjectivity modulo each prime).
class ResidueSplitting {
public:
    ResidueSplitting() = default;
    ResidueSplitting(const QuaternionOrder& O, const Ideal& N, const Ideal& discriminant);

    const arith::ResidueRing& ring() const noexcept { return ring_; }
    const Ideal& modulus() const noexcept { return ring_.modulus(); }
    const std::vector<Matrix2>& basis_images() const noexcept { return images_; }
    // Image of an element with denominator coprime to N.
    Matrix2 image(const OElement& x) const;
    Matrix2 image(const std::vector<long>& coords) const;

private:
    arith::ResidueRing ring_;
    std::vector<Matrix2> images_;
};

}  // namespace hmf::quat
