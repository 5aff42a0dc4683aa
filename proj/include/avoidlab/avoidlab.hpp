// Copyright 2026 The avoidlab Authors
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

#pragma once

#include "avoidlab/avoid.hpp"
#include "avoidlab/bits.hpp"
#include "avoidlab/circ_format.hpp"
#include "avoidlab/circuit.hpp"
#include "avoidlab/errors.hpp"
#include "avoidlab/inverters.hpp"
#include "avoidlab/lab.hpp"
#include "avoidlab/oracles.hpp"
#include "avoidlab/random.hpp"

#define AVOIDLAB_VERSION "0.1.0"
