#pragma once

#include "toricqc/error.hpp"
#include "toricqc/rational.hpp"
#include "toricqc/polynomial.hpp"
#include "toricqc/linalg.hpp"
#include "toricqc/presentation.hpp"
#include "toricqc/cohomology.hpp"
#include "toricqc/series.hpp"
#include "toricqc/ifunction.hpp"
#include "toricqc/mirror.hpp"
#include "toricqc/config.hpp"
#include "toricqc/emit.hpp"
#include "toricqc/cli.hpp"
