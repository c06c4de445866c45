// SPDX-License-Identifier: Apache-2.0
//
// covinterp - uplink/downlink covariance interpolation for antenna arrays
// Copyright (C) 2026 The covinterp authors
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

#ifndef COVINTERP_COVINTERP_HPP
#define COVINTERP_COVINTERP_HPP

#include "covinterp/chebyshev.hpp"
#include "covinterp/covariance.hpp"
#include "covinterp/estimators.hpp"
#include "covinterp/harness.hpp"
#include "covinterp/interpolate.hpp"
#include "covinterp/manifold.hpp"
#include "covinterp/psf.hpp"
#include "covinterp/simchannel.hpp"
#include "covinterp/types.hpp"

#endif
