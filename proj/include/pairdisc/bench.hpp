#pragma once

#include "bench/dataset.hpp"
#include "bench/report.hpp"
#include "bench/scoring.hpp"
