#pragma once

#include "gasa/cagasa.hpp"
#include "gasa/corpus.hpp"
#include "gasa/errors.hpp"
#include "gasa/evaluator.hpp"
#include "gasa/experiments.hpp"
#include "gasa/ga_engine.hpp"
#include "gasa/gasa.hpp"
#include "gasa/lexicon.hpp"
#include "gasa/model.hpp"
#include "gasa/rng.hpp"
