#pragma once

#include "mediff/calendar.hpp"
#include "mediff/config.hpp"
#include "mediff/core_model.hpp"
#include "mediff/decompose.hpp"
#include "mediff/detector.hpp"
#include "mediff/errors.hpp"
#include "mediff/esd.hpp"
#include "mediff/evalbench.hpp"
#include "mediff/format.hpp"
#include "mediff/io.hpp"
#include "mediff/median.hpp"
#include "mediff/student_t.hpp"
#include "mediff/time.hpp"
