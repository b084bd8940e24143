/* Copyright 2026 The eitsim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

// Umbrella header: the full pulse-level simulator of sequential EIT gates
// driven by a transported control atom.

#include "eitsim/common.hpp"      // IWYU pragma: export
#include "eitsim/hilbert.hpp"     // IWYU pragma: export
#include "eitsim/pulses.hpp"      // IWYU pragma: export
#include "eitsim/quadrature.hpp"  // IWYU pragma: export
#include "eitsim/transport.hpp"   // IWYU pragma: export
#include "eitsim/hamiltonian.hpp" // IWYU pragma: export
#include "eitsim/propagate.hpp"   // IWYU pragma: export
#include "eitsim/oracle.hpp"      // IWYU pragma: export
#include "eitsim/observables.hpp" // IWYU pragma: export
#include "eitsim/scenario.hpp"    // IWYU pragma: export
#include "eitsim/outputs.hpp"     // IWYU pragma: export
