#pragma once

#include "spinport/linalg.hpp"
#include "spinport/spin_core.hpp"
#include "spinport/dynamics.hpp"
#include "spinport/measurement.hpp"
#include "spinport/optimize.hpp"
#include "spinport/circular.hpp"
#include "spinport/classical_bench.hpp"
#include "spinport/parallel.hpp"
#include "spinport/protocol.hpp"
#include "spinport/io.hpp"
