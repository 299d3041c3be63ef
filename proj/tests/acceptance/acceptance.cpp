// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#include <cstdio>

int main() {
  std::puts("acceptance suite placeholder");
  return 0;
}
