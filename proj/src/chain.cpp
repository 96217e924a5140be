#include "grcsim/chain.hpp"

#include <stdexcept>

namespace grcsim {

SubsystemChain build_chain(PlantFamily family, const std::vector<SaturationLimits>& limits) {
    SubsystemChain chain;
    chain.family = family;
    chain.n = subsystem_count(family);
    if (static_cast<int>(limits.size()) != chain.n - 1) {
        throw std::invalid_argument("build_chain: expected one limit set per non-virtual control");
    }
    for (std::size_t i = 0; i < limits.size(); ++i) {
        if (!limits[i].valid()) throw std::invalid_argument("build_chain: invalid saturation limits");
        chain.limits[i] = limits[i];
    }

    chain.routing[0] = RefSource::TrajectoryPosition;
    chain.routing[1] = RefSource::TrajectoryVelocity;
    chain.routing[2] = family == PlantFamily::PdaLinearized ? RefSource::TrajectoryAcceleration
                                                            : RefSource::ControlU1;
    if (chain.n == 4) {
        chain.routing[3] = family == PlantFamily::PmsmEda ? RefSource::ConstantZero
                                                          : RefSource::ControlU2;
    }
    chain.physical_input_index = chain.n == 3 ? 2 : 3;
    return chain;
}

ReferenceFrame assemble_references(const SubsystemChain& chain, const TrajectorySample& traj,
                                   double u_1, double u_2) {
    ReferenceFrame refs;
    refs.x1d = traj.x_d;
    refs.x2d = traj.v_d;
    switch (chain.routing[2]) {
        case RefSource::ControlU1:
            refs.x3d = u_1;
            break;
        case RefSource::TrajectoryAcceleration:
            // Acceleration feedforward plus the cascade correction; without
            // the u_1 term the physical input would see no position feedback.
            refs.x3d = traj.a_d + u_1;
            break;
        default:
            throw std::logic_error("unexpected routing for subsystem 3");
    }
    if (chain.n == 4) {
        refs.has_x4d = true;
        refs.x4d = chain.routing[3] == RefSource::ControlU2 ? u_2 : 0.0;
    }
    return refs;
}

}  // namespace grcsim
