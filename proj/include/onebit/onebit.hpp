#pragma once

#include "onebit/embedding.hpp"
#include "onebit/geometry.hpp"
#include "onebit/ripcheck.hpp"
#include "onebit/stochastics.hpp"
#include "onebit/vctool.hpp"
#include "onebit/version.hpp"
