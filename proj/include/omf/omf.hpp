#pragma once

// Umbrella header for the core library: ternary quadratic forms, canonical
// reduction, even Clifford orders, p-neighbors, genus enumeration with the
// mass certificate, spinor/radical characters, Hecke operators, and exact
// eigensystem splitting. JSON and cache helpers live in omf/json_io.hpp and
// omf/cache.hpp; they need the vendored nlohmann header on the include path.

#include "omf/base.hpp"
#include "omf/builder.hpp"
#include "omf/characters.hpp"
#include "omf/clifford.hpp"
#include "omf/eigen.hpp"
#include "omf/forms.hpp"
#include "omf/genus.hpp"
#include "omf/hecke.hpp"
#include "omf/linalg.hpp"
#include "omf/mat3.hpp"
#include "omf/neighbor.hpp"
#include "omf/parallel.hpp"
#include "omf/reduce.hpp"
