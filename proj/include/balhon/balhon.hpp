#pragma once

#include "balhon/aggregate.hpp"
#include "balhon/cost.hpp"
#include "balhon/dataset.hpp"
#include "balhon/hon.hpp"
#include "balhon/inequality.hpp"
#include "balhon/report.hpp"
#include "balhon/riskcore.hpp"
#include "balhon/scenario.hpp"
