#pragma once

#include "dyca/baselines.hpp"
#include "dyca/dyca.hpp"
#include "dyca/dynsys.hpp"
#include "dyca/error.hpp"
#include "dyca/io.hpp"
#include "dyca/linalg.hpp"
#include "dyca/matrix.hpp"
#include "dyca/signal.hpp"
