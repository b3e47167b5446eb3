#pragma once

#include "hilbert/analysis.hpp"
#include "hilbert/csv.hpp"
#include "hilbert/czd.hpp"
#include "hilbert/error.hpp"
#include "hilbert/grid.hpp"
#include "hilbert/report.hpp"
#include "hilbert/signals.hpp"
#include "hilbert/transform.hpp"
