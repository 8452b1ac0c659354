#pragma once

#include "lsw/algebra.hpp"
#include "lsw/cascade.hpp"
#include "lsw/errors.hpp"
#include "lsw/harness.hpp"
#include "lsw/inequality.hpp"
#include "lsw/optics.hpp"
#include "lsw/povm.hpp"
#include "lsw/sampling.hpp"
