/*
 * Copyright 2026 The mot1d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

namespace mot {

// Absolute tolerances used throughout the library. All of them can be
// overridden from instance files, MOT_TOL_OVERRIDES or CLI flags.
struct Tolerances
{
    double mass_tol = 1e-12;    // total mass of a probability measure
    double order_tol = 1e-9;    // convex-order potential comparison
    double gap_tol = 1e-9;      // strictness of u_mu < u_nu
    double eq_tol = 1e-7;       // dual equality on the coupling support
    double viol_tol = 1e-7;     // dual inequality / normalization shape
    double supp_tol = 1e-10;    // coupling entries counted as support
    double conv_tol = 1e-6;     // Cauchy test for truncation profiles
    double lp_tol = 1e-9;       // simplex pivoting / infeasibility threshold
    double coupling_tol = 1e-8; // marginal and barycenter residuals
    double split_tol = 1e-9;    // endpoint mass split consistency
    double duality_tol = 1e-8;  // accepted |D - P| for a dual certificate
};

} // namespace mot
