// Copyright 2026 The vqalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQALAB_VQALAB_HPP
#define VQALAB_VQALAB_HPP

#include "vqalab/analytic.hpp"
#include "vqalab/circuits.hpp"
#include "vqalab/haar.hpp"
#include "vqalab/linalg.hpp"
#include "vqalab/observables.hpp"
#include "vqalab/parallel.hpp"
#include "vqalab/pauli.hpp"
#include "vqalab/random.hpp"
#include "vqalab/stats.hpp"
#include "vqalab/tensornet.hpp"

#endif  // VQALAB_VQALAB_HPP
