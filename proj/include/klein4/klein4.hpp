#pragma once
// Umbrella header for the whole library.

#include "klein4/average.hpp"
#include "klein4/cache.hpp"
#include "klein4/census.hpp"
#include "klein4/classnum.hpp"
#include "klein4/ellcurve.hpp"
#include "klein4/ffield.hpp"
#include "klein4/genus2.hpp"
#include "klein4/parallel.hpp"
#include "klein4/primes.hpp"
