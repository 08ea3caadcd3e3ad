#pragma once

#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/lie_algebra.hpp"
#include "finsler/randers.hpp"
