#pragma once

#include "tradex/absorbing.hpp"
#include "tradex/bta.hpp"
#include "tradex/eae.hpp"
#include "tradex/errors.hpp"
#include "tradex/eta.hpp"
#include "tradex/fdat.hpp"
#include "tradex/io.hpp"
#include "tradex/linalg.hpp"
#include "tradex/market.hpp"
#include "tradex/oracles.hpp"
#include "tradex/properties.hpp"
#include "tradex/pta.hpp"
#include "tradex/rational.hpp"
#include "tradex/solver.hpp"
#include "tradex/trace.hpp"
#include "tradex/trade_graph.hpp"
