#pragma once

#include "symsq/analysis.hpp"
#include "symsq/analysis_window.hpp"
#include "symsq/bits.hpp"
#include "symsq/concepts.hpp"
#include "symsq/learners.hpp"
#include "symsq/oracles.hpp"
#include "symsq/quantum.hpp"
#include "symsq/rng.hpp"
#include "symsq/symmetry.hpp"
#include "symsq/version.hpp"
