#pragma once

#include "nonres/divisors.hpp"
#include "nonres/errors.hpp"
#include "nonres/format.hpp"
#include "nonres/modarith.hpp"
#include "nonres/reduction.hpp"
#include "nonres/scan.hpp"
#include "nonres/selection.hpp"
