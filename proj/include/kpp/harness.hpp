#pragma once

#include <cstdint>
#include <string>

#include "kpp/reaction.hpp"
#include "kpp/report.hpp"

namespace kpp {

/// Phase-plane and steady-state checks: eigenvalue identities, the wall
/// coefficient's value/monotonicity, front residuals and tail decay fits at
/// and above the minimal speed, and steady-profile consistency. Closed-form
/// rows are added when the reaction admits them (logistic preset).
VerificationReport suite_profiles(const Reaction& r);

/// Time-stepper checks against exact linear solutions, order/stationarity
/// measurements, seeded comparison-ordering trials, and structural fixed
/// points. `seed` drives the randomized ordered-pair trials only.
VerificationReport suite_solver(const Reaction& r, std::uint64_t seed);

/// Wave-anchored construction at 1.25x the minimal speed and at the minimal
/// speed: sandwich containment, gap-versus-envelope bounds, and late-time
/// relaxation onto the steady state.
VerificationReport suite_type1(const Reaction& r);

/// Wall-anchored small-data family (members 1..4): per-run structure, family
/// ordering and detection-time rows, level-set transport diagnostics on the
/// finest member, and recentered window convergence.
VerificationReport suite_type2(const Reaction& r);

/// All four suites merged under prefixes profiles/, solver/, type1/, type2/.
VerificationReport run_all(const Reaction& r, std::uint64_t seed);

/// Dispatch by name ("profiles", "solver", "type1", "type2", "all").
/// Unknown names throw ConfigError. Exceptions raised inside a suite are
/// converted into a failing "raised" row, so a construction failure yields a
/// failed report rather than a crash.
VerificationReport run_suite(const std::string& name, const Reaction& r, std::uint64_t seed);

}  // namespace kpp
