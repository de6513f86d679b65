#pragma once

// Umbrella header: the statement grammar, derivation trees, rule checking,
// the script format, and bounded proof search.

#include "pft/syntax.hpp"
#include "pft/tree.hpp"
#include "pft/rules.hpp"
#include "pft/script.hpp"
#include "pft/search.hpp"
