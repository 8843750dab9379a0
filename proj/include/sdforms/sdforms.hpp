#pragma once

#include "sdforms/errors.hpp"
#include "sdforms/exterior.hpp"
#include "sdforms/skew.hpp"
#include "sdforms/random.hpp"
#include "sdforms/selfdual.hpp"
#include "sdforms/curvature.hpp"
#include "sdforms/io.hpp"
#include "sdforms/campaign.hpp"
