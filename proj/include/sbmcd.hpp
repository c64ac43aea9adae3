#pragma once

#include "sbmcd/errors.hpp"
#include "sbmcd/estimators.hpp"
#include "sbmcd/experiments.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/io.hpp"
#include "sbmcd/matrix.hpp"
#include "sbmcd/metrics.hpp"
#include "sbmcd/modularity.hpp"
#include "sbmcd/parallel.hpp"
#include "sbmcd/random_instances.hpp"
#include "sbmcd/rng.hpp"
#include "sbmcd/sampler.hpp"
#include "sbmcd/theory.hpp"
#include "sbmcd/verify.hpp"
