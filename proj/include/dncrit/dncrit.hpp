#pragma once

#include "dncrit/bounds.hpp"
#include "dncrit/certify.hpp"
#include "dncrit/enumerate.hpp"
#include "dncrit/error.hpp"
#include "dncrit/experiments.hpp"
#include "dncrit/exppoly.hpp"
#include "dncrit/matcore.hpp"
#include "dncrit/matrix.hpp"
#include "dncrit/signchange.hpp"
