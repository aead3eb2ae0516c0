#ifndef PDR_INS_HPP
#define PDR_INS_HPP

#include "pdr/types.hpp"

namespace pdr {

struct Compensated {
    Vec3 acc;   // m/s^2, bias-corrected specific force
    Vec3 gyro;  // rad/s, bias-corrected angular rate
};

/// Subtract the accumulated bias estimates from a raw sample.
Compensated compensate(const ImuSample& sample, const NavState& state);

/// One strapdown mechanization step (semi-implicit Euler): attitude first,
/// then velocity with the post-update attitude, then position with the
/// post-update velocity. Earth rotation and transport rate are ignored.
NavState propagate(const NavState& state, const Vec3& acc, const Vec3& gyro,
                   double dt, double g);

}  // namespace pdr

#endif  // PDR_INS_HPP
