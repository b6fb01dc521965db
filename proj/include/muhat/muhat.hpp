#pragma once

// Fourier-decay diagnostics for measures on graphs of functions on [0,1]:
// atomic measures and their transforms, annulus suprema and decay exponents,
// graph transport, good-function constructions, tube slices and Riesz
// energies, and the generators used to exercise all of it.

#include "muhat/decay.hpp"
#include "muhat/gen.hpp"
#include "muhat/goodfn.hpp"
#include "muhat/graphs.hpp"
#include "muhat/io.hpp"
#include "muhat/lemmas.hpp"
#include "muhat/measures.hpp"
#include "muhat/nufft.hpp"
#include "muhat/slicing.hpp"
