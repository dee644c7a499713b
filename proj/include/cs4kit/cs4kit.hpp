#pragma once

#include "bisim.hpp"
#include "formula.hpp"
#include "hilbert.hpp"
#include "model.hpp"
#include "relation.hpp"
#include "search.hpp"
#include "semantics.hpp"
#include "shallow.hpp"
