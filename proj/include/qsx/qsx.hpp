// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors

#pragma once

// Corpus and counting
#include "qsx/corpus.hpp"

// Graph construction
#include "qsx/graph.hpp"

// Expansion phases
#include "qsx/weighted_set.hpp"
#include "qsx/phase1.hpp"
#include "qsx/phase2.hpp"

// Debugging traces
#include "qsx/explain.hpp"

// Hybrid serving
#include "qsx/hybrid.hpp"

// Synthetic corpora
#include "qsx/synthgen.hpp"

// End-to-end wiring
#include "qsx/pipeline.hpp"
