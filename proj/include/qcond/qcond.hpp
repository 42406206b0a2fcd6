#pragma once

#include "qcond/alternating_sums.hpp"
#include "qcond/amplitude_estimation.hpp"
#include "qcond/boolean_function.hpp"
#include "qcond/calibration.hpp"
#include "qcond/calibration_runs.hpp"
#include "qcond/deutsch_jozsa.hpp"
#include "qcond/distribution.hpp"
#include "qcond/errors.hpp"
#include "qcond/estimators.hpp"
#include "qcond/harness.hpp"
#include "qcond/ledger.hpp"
#include "qcond/numerics.hpp"
#include "qcond/oracle.hpp"
#include "qcond/qcompare.hpp"
#include "qcond/rng.hpp"
#include "qcond/simplex.hpp"
#include "qcond/spectrum.hpp"
#include "qcond/testers.hpp"
