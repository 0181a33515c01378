/*
 * Copyright 2026 The WelfareLens Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WELFARELENS_WELFARELENS_HPP_
#define WELFARELENS_WELFARELENS_HPP_

#include "welfarelens/basis.hpp"
#include "welfarelens/csv.hpp"
#include "welfarelens/dataset.hpp"
#include "welfarelens/dgp.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/eval.hpp"
#include "welfarelens/experiment.hpp"
#include "welfarelens/io.hpp"
#include "welfarelens/nuisance.hpp"
#include "welfarelens/numeric.hpp"
#include "welfarelens/objectives.hpp"
#include "welfarelens/parallel.hpp"
#include "welfarelens/policies.hpp"
#include "welfarelens/pseudo.hpp"
#include "welfarelens/random.hpp"
#include "welfarelens/solvers.hpp"

#endif  // WELFARELENS_WELFARELENS_HPP_
