// Copyright 2026 The drivescope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "drivescope/clock.hpp"
#include "drivescope/error.hpp"
#include "drivescope/evidence.hpp"
#include "drivescope/features.hpp"
#include "drivescope/geometry.hpp"
#include "drivescope/ingest.hpp"
#include "drivescope/number.hpp"
#include "drivescope/phenotype.hpp"
#include "drivescope/resample.hpp"
#include "drivescope/rng.hpp"
#include "drivescope/scoring.hpp"
#include "drivescope/simgen.hpp"
#include "drivescope/telemetry.hpp"
