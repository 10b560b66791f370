#pragma once

// Umbrella header: Schreier structures on even-regular multigraphs, the
// subgroup <-> Schreier-graph correspondence, constructive 2-factorization
// labelings, lazy infinite graphs, and invariant cylinder measures.

#include "schreier/canonical.hpp"
#include "schreier/extend.hpp"
#include "schreier/factorize.hpp"
#include "schreier/io.hpp"
#include "schreier/isomorphism.hpp"
#include "schreier/lazy.hpp"
#include "schreier/measure.hpp"
#include "schreier/multigraph.hpp"
#include "schreier/neighborhood.hpp"
#include "schreier/rng.hpp"
#include "schreier/schreier_graph.hpp"
#include "schreier/subgroup.hpp"
#include "schreier/word.hpp"
