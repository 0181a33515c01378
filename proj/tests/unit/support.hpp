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

#ifndef WELFARELENS_TESTS_SUPPORT_HPP_
#define WELFARELENS_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <vector>

#include "welfarelens/welfarelens.hpp"

namespace wltest {

using namespace welfarelens;

// Random observed data with both arms present; covariates uniform on [-1, 1].
inline ObservedDataset RandomDataset(Rng& rng, std::size_t n, std::size_t dim) {
  ObservedDataset ds;
  ds.dim = dim;
  ds.x.resize(n * dim);
  ds.d.resize(n);
  ds.y.resize(n);
  for (double& v : ds.x) v = rng.Uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    ds.d[i] = i < 2 ? static_cast<int>(i) : (rng.Bernoulli(0.5) ? 1 : 0);
    ds.y[i] = 3.0 * rng.Normal();
  }
  return ds;
}

inline PseudoOutcomes RandomPseudo(Rng& rng, std::size_t n, double spread = 2.0) {
  std::vector<double> g0(n), g1(n);
  for (std::size_t i = 0; i < n; ++i) {
    g0[i] = spread * rng.Normal();
    g1[i] = spread * rng.Normal();
  }
  return PseudoOutcomes::FromComponents(PseudoKind::kIpw, g0, g1);
}

inline std::vector<std::uint8_t> RandomPolicy(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> pi(n);
  for (auto& v : pi) v = rng.Bernoulli(0.5) ? 1 : 0;
  return pi;
}

inline PseudoOutcomes PseudoFromGamma(const std::vector<double>& gamma) {
  return PseudoOutcomes::FromComponents(PseudoKind::kIpw, std::vector<double>(gamma.size(), 0.0),
                                        gamma);
}

}  // namespace wltest

#endif  // WELFARELENS_TESTS_SUPPORT_HPP_
