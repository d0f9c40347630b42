#pragma once

#include "tandemq/config.hpp"
#include "tandemq/des.hpp"
#include "tandemq/error.hpp"
#include "tandemq/phase_space.hpp"
#include "tandemq/qbd_generator.hpp"
#include "tandemq/stationary_solver.hpp"
#include "tandemq/throughput.hpp"
