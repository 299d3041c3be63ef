// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

namespace cfran {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cfran
