// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/parallel.hpp"

#include <omp.h>

namespace snrdiff {

int max_threads() { return omp_get_max_threads(); }

}  // namespace snrdiff
