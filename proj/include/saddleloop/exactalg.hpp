#pragma once

// Exact algebra kernel: rationals, dense and sparse polynomials, rational functions,
// resultants, Sturm chains and real-root isolation.

#include "dense.hpp"
#include "multipoly.hpp"
#include "ratfunc.hpp"
#include "rational.hpp"
#include "resultant.hpp"
#include "roots.hpp"
#include "serialize.hpp"
#include "sturm.hpp"
#include "unipoly.hpp"
