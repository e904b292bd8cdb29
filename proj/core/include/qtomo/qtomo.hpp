#pragma once

#include "qtomo/experiment.hpp"
#include "qtomo/frame.hpp"
#include "qtomo/information.hpp"
#include "qtomo/mle.hpp"
#include "qtomo/mub.hpp"
#include "qtomo/protocol.hpp"
#include "qtomo/random.hpp"
#include "qtomo/report.hpp"
#include "qtomo/serialize.hpp"
#include "qtomo/simulate.hpp"
#include "qtomo/state.hpp"
#include "qtomo/statistics.hpp"
#include "qtomo/types.hpp"
