// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_SCEVM_HPP
#define SCEVM_SCEVM_HPP

#include <scevm/analytic.hpp>
#include <scevm/channel_sim.hpp>
#include <scevm/errors.hpp>
#include <scevm/quadrature.hpp>
#include <scevm/rng.hpp>
#include <scevm/specfun.hpp>
#include <scevm/sweep.hpp>
#include <scevm/system_config.hpp>
#include <scevm/verify.hpp>

#endif // SCEVM_SCEVM_HPP
