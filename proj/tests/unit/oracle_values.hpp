#pragma once

// Generated by tests/oracles/oracles.py.

namespace oracle {

// derivatives at rho 12000, lambda 1.6, gamma_E -1.5, a_E -150, gamma_P 1.55, a_P 100, u 0.3, v -1
inline constexpr double kRate_rho = -4984.3860641824800;
inline constexpr double kRate_lambda = 0.031210955399480517;
inline constexpr double kRate_gamma_E = -0.060000000000000000;
inline constexpr double kRate_a_E = -230.66500000000000;
inline constexpr double kRate_gamma_P = 0.040000000000000000;
inline constexpr double kRate_a_P = 161.94887500000000;
inline constexpr double kTgoOblique = 2.4075181668272709;

// scenario-like delays a = 0.05, b1 = 0.15, b2 = 0.3, omega = 1/3, mu = 2.25, eps = 1
inline constexpr double kA_0p5 = 0.26409076506787050;
inline constexpr double kA_1 = 0.64702290013480440;
inline constexpr double kA_3 = 2.5936041046144949;
inline constexpr double kA_10 = 9.8242926909441870;
inline constexpr double kTauS = 0.59451583855755800;
inline constexpr double kGuaranteedMiss = 0.020280395411853888;
inline constexpr double kBoundaryAt3 = 2.0642322545604947;

// zero delays, mu = 1.5, eps = 0.5 (mu eps < 1, so the DGL1 singular onset is positive)
inline constexpr double kTauSDgl1 = 1.1513886520021682;

// DGLC constant delay 0.3 s (1.5 normalized), Delta_1 = 0, mu = 2.25, eps = 1
inline constexpr double kTauSDglc = 1.0593589802732647;

// two sign changes, a = 0.03, b1 = 0.2625, b2 = 0.3, omega = 2/3, eps = 2, mu = 1.1
inline constexpr double kMultiRoot0 = 1.6097631349461574;
inline constexpr double kMultiRoot1 = 3.9914382431203100;

// detection-delay model
inline constexpr double kAnalyticB = 0.24823148258990300;
inline constexpr double kAnalyticTheta3 = 0.36801174910205852;
inline constexpr double kPropagatedHalf = 0.20842513149602493;

}  // namespace oracle
