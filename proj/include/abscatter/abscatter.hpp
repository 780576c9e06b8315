#pragma once

#include "abscatter/checks.hpp"
#include "abscatter/errors.hpp"
#include "abscatter/partial_wave.hpp"
#include "abscatter/specfun.hpp"
#include "abscatter/sweep.hpp"
