#include <doctest.h>

#include "grcsim/chain.hpp"

using namespace grcsim;

namespace {
std::vector<SaturationLimits> limits_for(int n) {
    return std::vector<SaturationLimits>(static_cast<std::size_t>(n - 1),
                                         SaturationLimits{-10.0, 10.0});
}
}  // namespace

TEST_CASE("chain shape per family") {
    for (PlantFamily f : {PlantFamily::UniversalMotorEda, PlantFamily::PmsmEda,
                          PlantFamily::HdaCylinder, PlantFamily::HdaMotorWithValve,
                          PlantFamily::PdaLinearized}) {
        const int n = subsystem_count(f);
        const auto chain = build_chain(f, limits_for(n));
        CHECK(chain.family == f);
        CHECK(chain.n == n);
        CHECK(chain.physical_input_index == (n == 3 ? 2 : 3));
        CHECK(chain.routing[0] == RefSource::TrajectoryPosition);
        CHECK(chain.routing[1] == RefSource::TrajectoryVelocity);
    }
}

TEST_CASE("third and fourth reference routing") {
    CHECK(build_chain(PlantFamily::PmsmEda, limits_for(4)).routing[2] == RefSource::ControlU1);
    CHECK(build_chain(PlantFamily::PmsmEda, limits_for(4)).routing[3] == RefSource::ConstantZero);
    CHECK(build_chain(PlantFamily::HdaMotorWithValve, limits_for(4)).routing[3]
          == RefSource::ControlU2);
    CHECK(build_chain(PlantFamily::PdaLinearized, limits_for(3)).routing[2]
          == RefSource::TrajectoryAcceleration);
    CHECK(build_chain(PlantFamily::HdaCylinder, limits_for(3)).routing[2]
          == RefSource::ControlU1);
}

TEST_CASE("limit count must match") {
    CHECK_THROWS(build_chain(PlantFamily::PmsmEda, limits_for(3)));
    CHECK_THROWS(build_chain(PlantFamily::HdaCylinder, limits_for(4)));
}

TEST_CASE("is_physical splits the cascade") {
    const auto pmsm = build_chain(PlantFamily::PmsmEda, limits_for(4));
    CHECK_FALSE(pmsm.is_physical(1));
    CHECK(pmsm.is_physical(2));  // u_q feeds the plant; the d-loop is parallel
    CHECK(pmsm.is_physical(3));
    const auto cyl = build_chain(PlantFamily::HdaCylinder, limits_for(3));
    CHECK_FALSE(cyl.is_physical(1));
    CHECK(cyl.is_physical(2));
}

TEST_CASE("pmsm reference assembly") {
    const auto chain = build_chain(PlantFamily::PmsmEda, limits_for(4));
    const auto refs = assemble_references(chain, {1.0, 0.2, 0.0}, 3.3, 0.0);
    CHECK(refs.x1d == 1.0);
    CHECK(refs.x2d == 0.2);
    CHECK(refs.x3d == 3.3);
    CHECK(refs.x4d == 0.0);
    CHECK(refs.has_x4d);
}

TEST_CASE("pda acceleration reference") {
    const auto chain = build_chain(PlantFamily::PdaLinearized, limits_for(3));
    const auto refs = assemble_references(chain, {0.0, 0.0, -9.8}, 0.0, 0.0);
    CHECK(refs.x3d == -9.8);
    CHECK_FALSE(refs.has_x4d);
    // the cascade correction u_1 enters the acceleration reference
    const auto fed = assemble_references(chain, {0.0, 0.0, -9.8}, 1.5, 0.0);
    CHECK(fed.x3d == doctest::Approx(-8.3));
}

TEST_CASE("valve motor fourth reference is u_2") {
    const auto chain = build_chain(PlantFamily::HdaMotorWithValve, limits_for(4));
    const auto refs = assemble_references(chain, {0.0, 0.0, 0.0}, 0.0, 0.7);
    CHECK(refs.x4d == 0.7);
    CHECK(refs.has_x4d);
}
