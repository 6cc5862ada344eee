// Copyright 2026 The ordertrans Authors
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

// Shared reference data and helpers for the test suites.

#include <array>
#include <cstdint>
#include <vector>

#include "ordertrans/dtmc.hpp"
#include "ordertrans/synth.hpp"

namespace fixtures {

inline constexpr std::array<const char*, 3> kCategories = {"HMC", "MMC", "LMC"};

// Stationary distributions per category and zone (T1..T6), states AB..CA.
// Rounded to four decimals, so rows do not sum to exactly one.
inline constexpr double kReferenceStationary[3][6][10] = {
    {  // HMC
        {0.2611, 0.2486, 0.2335, 0.2227, 0.0120, 0.0104, 0.0049, 0.0045, 0.0012, 0.0010},
        {0.2517, 0.2454, 0.2386, 0.2348, 0.0108, 0.0087, 0.0043, 0.0037, 0.0012, 0.0009},
        {0.2526, 0.2450, 0.2403, 0.2341, 0.0100, 0.0088, 0.0038, 0.0036, 0.0010, 0.0008},
        {0.2507, 0.2463, 0.2390, 0.2365, 0.0098, 0.0085, 0.0039, 0.0035, 0.0009, 0.0008},
        {0.2509, 0.2458, 0.2387, 0.2353, 0.0104, 0.0091, 0.0041, 0.0039, 0.0009, 0.0008},
        {0.2504, 0.2463, 0.2334, 0.2316, 0.0132, 0.0121, 0.0054, 0.0051, 0.0013, 0.0012},
    },
    {  // MMC
        {0.2494, 0.2485, 0.2313, 0.2263, 0.0092, 0.0095, 0.0039, 0.0040, 0.0084, 0.0095},
        {0.2411, 0.2489, 0.2302, 0.2378, 0.0092, 0.0091, 0.0041, 0.0036, 0.0071, 0.0089},
        {0.2513, 0.2453, 0.2408, 0.2345, 0.0091, 0.0092, 0.0039, 0.0038, 0.0011, 0.0010},
        {0.2505, 0.2463, 0.2397, 0.2363, 0.0089, 0.0090, 0.0038, 0.0037, 0.0010, 0.0009},
        {0.2506, 0.2460, 0.2403, 0.2350, 0.0089, 0.0090, 0.0041, 0.0041, 0.0011, 0.0010},
        {0.2454, 0.2497, 0.2324, 0.2355, 0.0114, 0.0124, 0.0052, 0.0054, 0.0013, 0.0012},
    },
    {  // LMC
        {0.2553, 0.2537, 0.2342, 0.2251, 0.0114, 0.0104, 0.0046, 0.0041, 0.0006, 0.0007},
        {0.2479, 0.2482, 0.2351, 0.2368, 0.0119, 0.0104, 0.0049, 0.0040, 0.0004, 0.0005},
        {0.2523, 0.2442, 0.2403, 0.2319, 0.0112, 0.0108, 0.0045, 0.0040, 0.0004, 0.0004},
        {0.2489, 0.2475, 0.2369, 0.2348, 0.0121, 0.0108, 0.0044, 0.0039, 0.0003, 0.0003},
        {0.2473, 0.2489, 0.2356, 0.2356, 0.0117, 0.0109, 0.0048, 0.0046, 0.0003, 0.0003},
        {0.2444, 0.2501, 0.2270, 0.2323, 0.0154, 0.0150, 0.0073, 0.0068, 0.0009, 0.0009},
    },
};

// Pairwise Jensen-Shannon tables between zones, lower triangle, (row, col) = (Ti, Tj).
inline constexpr double kReferenceJsd[3][6][6] = {
    {  // HMC
        {0.0},
        {0.0182, 0.0},
        {0.0203, 0.0056, 0.0},
        {0.0225, 0.0069, 0.0045, 0.0},
        {0.0190, 0.0050, 0.0048, 0.0050, 0.0},
        {0.0157, 0.0218, 0.0252, 0.0265, 0.0220, 0.0},
    },
    {  // MMC
        {0.0},
        {0.0145, 0.0},
        {0.0729, 0.0677, 0.0},
        {0.0744, 0.0689, 0.0033, 0.0},
        {0.0728, 0.0675, 0.0024, 0.0041, 0.0},
        {0.0715, 0.0663, 0.0234, 0.0247, 0.0226, 0.0},
    },
    {  // LMC
        {0.0},
        {0.0142, 0.0},
        {0.0136, 0.0093, 0.0},
        {0.0154, 0.0068, 0.0072, 0.0},
        {0.0159, 0.0068, 0.0096, 0.0057, 0.0},
        {0.0344, 0.0326, 0.0362, 0.0347, 0.0318, 0.0},
    },
};

inline std::vector<double> reference_vector(std::size_t category, std::size_t zone) {
  const auto& row = kReferenceStationary[category][zone];
  return std::vector<double>(row, row + 10);
}

/// Strictly positive row-stochastic matrix with rows drawn uniformly from the simplex.
inline ordertrans::TransitionMatrix random_tpm(std::size_t states, std::uint64_t seed) {
  ordertrans::Rng rng(seed);
  return ordertrans::random_ergodic_tpm(states, rng);
}

/// Pairs (x[t], x[t + lag]) counted by explicit enumeration.
inline std::vector<std::vector<std::uint64_t>> brute_pairs(const std::vector<std::uint8_t>& x,
                                                           std::size_t lag, std::size_t states) {
  std::vector<std::vector<std::uint64_t>> n(states, std::vector<std::uint64_t>(states, 0));
  for (std::size_t t = 0; t + lag < x.size(); ++t) n[x[t]][x[t + lag]] += 1;
  return n;
}

}  // namespace fixtures
