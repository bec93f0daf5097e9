#pragma once

#include "p3pc/combinatorics.hpp"
#include "p3pc/dag.hpp"
#include "p3pc/dsep.hpp"
#include "p3pc/error.hpp"
#include "p3pc/experiment.hpp"
#include "p3pc/ingest.hpp"
#include "p3pc/parallel.hpp"
#include "p3pc/pc.hpp"
#include "p3pc/preproc.hpp"
#include "p3pc/rng.hpp"
#include "p3pc/theory.hpp"
#include "p3pc/trail.hpp"
