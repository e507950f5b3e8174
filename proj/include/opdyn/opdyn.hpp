#pragma once

#include "opdyn/rational.hpp"
#include "opdyn/linalg.hpp"
#include "opdyn/rng.hpp"
#include "opdyn/stats.hpp"
#include "opdyn/montecarlo.hpp"
#include "opdyn/network.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/degroot.hpp"
#include "opdyn/voter.hpp"
#include "opdyn/majority.hpp"
#include "opdyn/bayes.hpp"
#include "opdyn/cascade.hpp"
#include "opdyn/harness.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/acceptance.hpp"
