#pragma once

#include <array>
#include <vector>

#include "grcsim/types.hpp"

namespace grcsim {

/// Where subsystem j takes its reference from.
enum class RefSource {
    TrajectoryPosition,
    TrajectoryVelocity,
    TrajectoryAcceleration,
    ControlU1,
    ControlU2,
    ConstantZero,
};

struct TrajectorySample {
    double x_d = 0.0;
    double v_d = 0.0;
    double a_d = 0.0;
};

/// Ordered subsystem decomposition of one actuator family: reference routing
/// per subsystem, index of the first control that physically enters the
/// plant, and saturation limits for u_1..u_{n-1}.
///
/// The PMSM d-axis loop is a parallel regulation loop (reference 0, its own
/// physical input u_3), not a cascade stage below u_2.
struct SubsystemChain {
    PlantFamily family;
    int n = 0;
    std::array<RefSource, 4> routing{};
    int physical_input_index = 0;              // 2 for n=3 families, 3 for n=4
    std::array<SaturationLimits, 3> limits{};  // for u_1, u_2, u_3

    bool is_physical(int v) const {
        // The PMSM q-axis input u_2 feeds the plant even though the parallel
        // d-axis loop pushes physical_input_index to 3.
        if (family == PlantFamily::PmsmEda && v == 2) return true;
        return v >= physical_input_index;
    }
};

/// Builds the decomposition for a family. `limits` covers the non-virtual
/// controls u_1..u_{n-1}, in order; count must equal n-1.
SubsystemChain build_chain(PlantFamily family, const std::vector<SaturationLimits>& limits);

/// Populates the per-subsystem references for one tick. Controls must have
/// been computed this tick, in cascade order. For the linearized PDA the
/// third reference is the trajectory acceleration plus the cascade
/// correction u_1, so position feedback reaches the physical input.
ReferenceFrame assemble_references(const SubsystemChain& chain, const TrajectorySample& traj,
                                   double u_1, double u_2);

}  // namespace grcsim
