// SPDX-License-Identifier: Apache-2.0
//
// gensm-mimo: hybrid precoding for GenSM-aided mmWave MIMO
// Copyright (C) 2026 gensm-mimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Two-step hybrid precoder optimization: barrier-method projected gradient
// ascent over the power allocation (a concave problem), lp-relaxed barrier
// gradient ascent over the analog vector with a final phase projection, and
// the alternating driver.
//
// Complex gradient convention: for a real cost f of a complex vector, a
// gradient g returned here is the Wirtinger derivative with respect to the
// conjugate variable, so the directional derivative along a step d is
// 2 Re(g^H d) and the real-coordinate mapping is df/dRe(a_i) = 2 Re(g_i),
// df/dIm(a_i) = 2 Im(g_i). The finite-difference checker enforces exactly
// this mapping.

#ifndef GENSM_OPTIMIZER_HPP
#define GENSM_OPTIMIZER_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <functional>
#include <ostream>
#include <vector>

#include "gensm/se_metrics.hpp"
#include "gensm/system.hpp"

namespace gensm {

struct DigitalOptParams {
    double t_b = 64.0;      ///< barrier coefficient
    double eps_halt = 1e-3; ///< relative-step halting threshold
    std::size_t max_iters = 500;
    double alpha = 0.3; ///< Armijo fraction, in (0, 0.5)
    double beta = 0.7;  ///< backtracking shrink factor, in (0, 1)

    void validate() const;
};

struct AnalogOptParams {
    double p0 = 32.0;    ///< initial lp exponent (>= 2)
    double delta_p = 10.0;
    double p_max = 64.0;
    double t_b = 64.0;
    double eps_halt = 1e-3;
    std::size_t max_iters = 500;
    double alpha = 0.3;
    double beta = 0.7;

    void validate() const;
};

enum class OptPhase { digital, analog };

/// One accepted ascent step.
struct TraceRecord {
    std::size_t iter = 0;   ///< global step index within the run
    OptPhase phase = OptPhase::digital;
    double rlb = 0.0;       ///< R_LB in bits; projected iterate for analog steps
    double rlb_relaxed = 0.0; ///< R_LB at the relaxed iterate (analog), == rlb for digital
    double objective = 0.0; ///< barrier objective accepted by the line search
    double step = 0.0;      ///< accepted step length
    double grad_norm = 0.0; ///< norm of the search direction
    double p = 0.0;         ///< lp exponent in force (analog steps only)
};

struct OptTrace {
    std::vector<TraceRecord> records;
    bool max_iters_hit = false;

    void append(const OptTrace &other);
    /// CSV with columns iteration, phase, cost, step, grad_norm.
    void write_csv(std::ostream &os) const;
};

/// Gradient of R_LB with respect to the joint power allocation vector.
/// Requires a strictly positive lambda (interior point).
arma::vec grad_rlb_lambda(const arma::cx_mat &h, const PowerAllocation &lambda,
                          const AnalogVector &a, const SystemConfig &cfg);

/// Barrier part (1/t_b) [1/lambda_1, ...] of the digital objective gradient.
arma::vec grad_barrier_lambda(const arma::vec &lambda, double t_b);

/// Projection onto the zero-sum tangent of the total-power constraint.
arma::vec project_tangent(const arma::vec &g);

/// Wirtinger gradient of R_LB with respect to the analog vector.
arma::cx_vec grad_rlb_a(const arma::cx_mat &h, const PowerAllocation &lambda,
                        const AnalogVector &a, const SystemConfig &cfg);

/// Barrier part of the analog objective gradient at lp exponent p.
/// Requires ||a||_p strictly inside the 1/sqrt(n_k) ball.
arma::cx_vec grad_barrier_a(const arma::cx_vec &a, double p, double t_b,
                            arma::uword n_k);

/// Barrier-method projected gradient ascent over the power allocation.
std::pair<PowerAllocation, OptTrace> optimize_digital(const arma::cx_mat &h,
                                                      const AnalogVector &a,
                                                      const PowerAllocation &lambda0,
                                                      const SystemConfig &cfg,
                                                      const DigitalOptParams &params);

/// lp-schedule barrier gradient ascent over the analog vector; the returned
/// vector is phase-projected onto the unit-modulus set.
std::pair<AnalogVector, OptTrace> optimize_analog(const arma::cx_mat &h,
                                                  const PowerAllocation &lambda,
                                                  const AnalogVector &a0,
                                                  const SystemConfig &cfg,
                                                  const AnalogOptParams &params);

struct HybridResult {
    PowerAllocation lambda;
    AnalogVector a; ///< projected (unit modulus)
    OptTrace trace;
    double rlb_projected = 0.0; ///< R_LB at the returned pair, bits
    std::size_t outer_phases = 0; ///< digital/analog phase steps executed
    bool converged = false;
};

/// Alternating two-step driver; stops when the projected R_LB change over a
/// full outer iteration falls below eps_outer (relative) or after max_outer
/// outer iterations.
HybridResult optimize_hybrid(const arma::cx_mat &h, const PowerAllocation &lambda0,
                             const AnalogVector &a0, const SystemConfig &cfg,
                             const DigitalOptParams &dparams,
                             const AnalogOptParams &aparams,
                             std::size_t max_outer = 30, double eps_outer = 1e-4);

/// Central-difference validation of a real-vector gradient; returns the max
/// over coordinates of |analytic - numeric| / max(|numeric|, 1e-12).
double finite_diff_check(const std::function<double(const arma::vec &)> &cost,
                         const std::function<arma::vec(const arma::vec &)> &grad,
                         const arma::vec &x, double h);

/// Complex-point variant: coordinates are the stacked real/imaginary parts
/// and the analytic gradient is mapped by the Wirtinger convention above.
double finite_diff_check(const std::function<double(const arma::cx_vec &)> &cost,
                         const std::function<arma::cx_vec(const arma::cx_vec &)> &grad,
                         const arma::cx_vec &x, double h);

/// Worst finite-difference relative errors of the four analytic gradients
/// over randomized instances with dimensions up to (n_t=8, n_r=8, M=4).
struct GradientSuiteResult {
    double rlb_lambda = 0.0;
    double rlb_a = 0.0;
    double barrier_lambda = 0.0;
    double barrier_a = 0.0;
    double worst() const
    {
        return std::max(std::max(rlb_lambda, rlb_a),
                        std::max(barrier_lambda, barrier_a));
    }
};

GradientSuiteResult run_gradient_suite(std::size_t n_instances, std::uint64_t seed);

} // namespace gensm

#endif
