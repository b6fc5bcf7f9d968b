#pragma once

#include "kbt/beatty.hpp"
#include "kbt/bigfloat.hpp"
#include "kbt/discrepancy.hpp"
#include "kbt/errors.hpp"
#include "kbt/expsums.hpp"
#include "kbt/harness.hpp"
#include "kbt/hyperbola.hpp"
#include "kbt/io.hpp"
#include "kbt/irrational.hpp"
#include "kbt/modular.hpp"
#include "kbt/real.hpp"
#include "kbt/rng.hpp"
