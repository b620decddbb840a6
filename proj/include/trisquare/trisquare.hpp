#pragma once

#include "trisquare/digits.hpp"
#include "trisquare/driver.hpp"
#include "trisquare/exact.hpp"
#include "trisquare/families.hpp"
#include "trisquare/gap.hpp"
#include "trisquare/json_io.hpp"
#include "trisquare/pade.hpp"
#include "trisquare/parallel.hpp"
#include "trisquare/poly.hpp"
#include "trisquare/rnsolve.hpp"
#include "trisquare/sieve.hpp"
