// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rankdiv/consensus.hpp"
#include "rankdiv/core.hpp"
#include "rankdiv/error.hpp"
#include "rankdiv/group.hpp"
#include "rankdiv/ingest.hpp"
#include "rankdiv/pairwise.hpp"
#include "rankdiv/random.hpp"
#include "rankdiv/report.hpp"
#include "rankdiv/special.hpp"
#include "rankdiv/stats.hpp"
#include "rankdiv/synth.hpp"
#include "rankdiv/table.hpp"
