#pragma once

#include "pdi/error.hpp"
#include "pdi/expsum.hpp"
#include "pdi/gamma.hpp"
#include "pdi/instance.hpp"
#include "pdi/io.hpp"
#include "pdi/kernel.hpp"
#include "pdi/min_sum.hpp"
#include "pdi/numeric.hpp"
#include "pdi/parallel.hpp"
#include "pdi/params.hpp"
#include "pdi/primes.hpp"
#include "pdi/sieve.hpp"
#include "pdi/verify.hpp"
#include "pdi/version.hpp"
