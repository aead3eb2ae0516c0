#include "pdr/ins.hpp"

#include "pdr/mathcore.hpp"

namespace pdr {

Compensated compensate(const ImuSample& sample, const NavState& state) {
    return {sample.acc - state.ba, sample.gyro - state.bg};
}

NavState propagate(const NavState& state, const Vec3& acc, const Vec3& gyro,
                   double dt, double g) {
    NavState next = state;
    next.q = quat_propagate(state.q, gyro, dt);
    // Gravity acceleration points along -z (a level accelerometer reads +g).
    const Vec3 a_nav = quat_to_rotmat(next.q) * acc - Vec3(0.0, 0.0, g);
    next.v = state.v + a_nav * dt;
    next.r = state.r + next.v * dt;
    next.t = state.t + dt;
    return next;
}

}  // namespace pdr
