#pragma once

#include "bench.hpp"
#include "discover.hpp"
#include "indep.hpp"
#include "model.hpp"
#include "random.hpp"
#include "regress.hpp"
#include "synth.hpp"
