// Copyright 2026 The commudyn Authors
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

#include "commudyn/classical.hpp"
#include "commudyn/errors.hpp"
#include "commudyn/genfactory.hpp"
#include "commudyn/kernel.hpp"
#include "commudyn/lattice.hpp"
#include "commudyn/oracle.hpp"
#include "commudyn/quadrature.hpp"
#include "commudyn/qubit.hpp"
#include "commudyn/superop.hpp"
#include "commudyn/timefn.hpp"
#include "commudyn/types.hpp"
#include "commudyn/weyl.hpp"
