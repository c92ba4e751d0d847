// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "poptk/bignum.hpp"
#include "poptk/bottom.hpp"
#include "poptk/bounds.hpp"
#include "poptk/core.hpp"
#include "poptk/cpn.hpp"
#include "poptk/dense.hpp"
#include "poptk/error.hpp"
#include "poptk/format.hpp"
#include "poptk/hilbert.hpp"
#include "poptk/reach.hpp"
#include "poptk/reduce.hpp"
#include "poptk/stab.hpp"
#include "poptk/verify.hpp"
