#pragma once

#include "exactdag/balancer.hpp"
#include "exactdag/bigfloat.hpp"
#include "exactdag/config.hpp"
#include "exactdag/cost_model.hpp"
#include "exactdag/dag.hpp"
#include "exactdag/evaluate.hpp"
#include "exactdag/exact_real.hpp"
#include "exactdag/interval.hpp"
