// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <string>

#include "cfran/milp.hpp"

namespace cfran {

// CPLEX-style LP text: Minimize / Subject To / Bounds / Binaries / End.
// Coefficients are printed with full precision so that write -> parse is an
// exact round trip.
std::string write_lp(const MilpModel& model);

// Parses the grammar emitted by write_lp plus the common variations
// (Maximize, s.t., free bounds, Generals section). Link bookkeeping and user
// lists are not part of the format and stay empty on the parsed model.
MilpModel parse_lp(const std::string& text);

}  // namespace cfran
