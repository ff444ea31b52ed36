#pragma once

#include <array>
#include <string>
#include <vector>

#include "anematic/run.hpp"

namespace anematic {

/// Property suites, one per module, in execution order.
const std::vector<std::string>& suite_names();

/// Runs one suite; `seed` drives the random inputs. Throws ConfigError for an unknown name.
std::vector<CheckLine> run_suite(const std::string& name, unsigned long seed = 1);

namespace checks {
std::vector<CheckLine> tensor(unsigned long seed);
std::vector<CheckLine> rheology(unsigned long seed);
std::vector<CheckLine> pressure(unsigned long seed);
std::vector<CheckLine> domain(unsigned long seed);
std::vector<CheckLine> galerkin(unsigned long seed);
std::vector<CheckLine> continuity(unsigned long seed);
std::vector<CheckLine> nematic(unsigned long seed);
std::vector<CheckLine> momentum(unsigned long seed);
std::vector<CheckLine> energy(unsigned long seed);
std::vector<CheckLine> orchestrator(unsigned long seed);

/// Shared helpers for building check lines and random inputs.
CheckLine at_most(const std::string& name, double worst, double limit);
CheckLine at_least(const std::string& name, double worst, double limit);

/// Gap between the two commutator quadratures on manufactured fields at N = 16, 32, 64; the order is read off the
/// last pair since the wall layer keeps N = 16 pre-asymptotic.
std::array<double, 3> commutator_identity_gaps();
}  // namespace checks

}  // namespace anematic
