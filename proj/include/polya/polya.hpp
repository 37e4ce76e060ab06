#pragma once

#include "polya/approx.hpp"
#include "polya/core_exact.hpp"
#include "polya/errors.hpp"
#include "polya/oracle_dp.hpp"
#include "polya/rational.hpp"
#include "polya/rng.hpp"
#include "polya/simulate.hpp"
