#pragma once

#include "mimome/baselines.hpp"
#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/csie.hpp"
#include "mimome/errors.hpp"
#include "mimome/experiments.hpp"
#include "mimome/ncsie.hpp"
#include "mimome/search_tree.hpp"
#include "mimome/selection_types.hpp"
