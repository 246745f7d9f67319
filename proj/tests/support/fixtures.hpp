#pragma once

#include <memory>
#include <numbers>

#include "hopf/dalembert.hpp"
#include "hopf/legendrian.hpp"

namespace fixture {

inline std::shared_ptr<hopf::DalembertPatch> make_pair(hopf::ContactCurve first, hopf::ContactCurve second,
                                                       hopf::HopfParams params, hopf::LatticeAxis s,
                                                       hopf::LatticeAxis t, hopf::TauFieldOptions opts = {})
{
    return std::make_shared<hopf::DalembertPatch>(std::make_shared<hopf::CurvePatch>(std::move(first)),
                                                  std::make_shared<hopf::CurvePatch>(std::move(second)), params,
                                                  hopf::ParameterLattice({s, t}), opts);
}

// Great circle (mu = pi/4) against the tilted circle mu = pi/3.
inline std::shared_ptr<hopf::DalembertPatch> mixed_pair(hopf::HopfParams params,
                                                        hopf::LatticeAxis s = {0.0, 1.5, 16},
                                                        hopf::LatticeAxis t = {0.5, 2.5, 16})
{
    return make_pair(hopf::great_circle_curve(), hopf::tilted_circle_curve(std::numbers::pi / 3), params, s, t);
}

inline std::shared_ptr<hopf::DalembertPatch> great_circle_pair(hopf::HopfParams params,
                                                               hopf::LatticeAxis s = {0.0, 1.5, 16},
                                                               hopf::LatticeAxis t = {2.0, 3.5, 16},
                                                               hopf::TauFieldOptions opts = {})
{
    return make_pair(hopf::great_circle_curve(), hopf::great_circle_curve(), params, s, t, opts);
}

} // namespace fixture
