/*
 * Copyright 2026 The maxcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAXCON_MAXCON_HPP_
#define MAXCON_MAXCON_HPP_

#include "maxcon/baselines.hpp"
#include "maxcon/bench.hpp"
#include "maxcon/convex.hpp"
#include "maxcon/diversity.hpp"
#include "maxcon/errors.hpp"
#include "maxcon/fit_result.hpp"
#include "maxcon/geometry.hpp"
#include "maxcon/io.hpp"
#include "maxcon/residual_system.hpp"
#include "maxcon/reweight.hpp"
#include "maxcon/rng.hpp"
#include "maxcon/simplex.hpp"
#include "maxcon/synthetic.hpp"

#endif  // MAXCON_MAXCON_HPP_
