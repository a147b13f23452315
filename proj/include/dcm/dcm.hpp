#pragma once

#include "dcm/error.hpp"
#include "dcm/random.hpp"
#include "dcm/degrees.hpp"
#include "dcm/configuration.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/walk.hpp"
#include "dcm/local_dynamics.hpp"
#include "dcm/exact_oracle.hpp"
#include "dcm/stats.hpp"
#include "dcm/topology.hpp"
#include "dcm/estimators.hpp"
#include "dcm/io.hpp"
#include "dcm/runner.hpp"
