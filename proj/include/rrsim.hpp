#pragma once

#include "rrsim/aodv.hpp"
#include "rrsim/cost_model.hpp"
#include "rrsim/dsr.hpp"
#include "rrsim/dymo.hpp"
#include "rrsim/experiment.hpp"
#include "rrsim/ring_oracle.hpp"
#include "rrsim/runner.hpp"
#include "rrsim/scenario.hpp"
