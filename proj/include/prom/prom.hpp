// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_PROM_HPP
#define PROM_PROM_HPP

#include "prom/eigensolve.hpp"
#include "prom/error.hpp"
#include "prom/experiment.hpp"
#include "prom/fem.hpp"
#include "prom/io.hpp"
#include "prom/linalg.hpp"
#include "prom/mesh.hpp"
#include "prom/pod.hpp"
#include "prom/rom.hpp"
#include "prom/sampling.hpp"

#endif  // PROM_PROM_HPP
