#pragma once

#include "tsetlin/error.hpp"
#include "tsetlin/random.hpp"
#include "tsetlin/automaton.hpp"
#include "tsetlin/clause.hpp"
#include "tsetlin/feedback.hpp"
#include "tsetlin/config.hpp"
#include "tsetlin/classic.hpp"
#include "tsetlin/multiclass.hpp"
#include "tsetlin/regression.hpp"
#include "tsetlin/fit.hpp"
#include "tsetlin/snapshot.hpp"
#include "tsetlin/adapters.hpp"
#include "tsetlin/model.hpp"
#include "tsetlin/dataset.hpp"
#include "tsetlin/experiments.hpp"
#include "tsetlin/reproduce.hpp"
