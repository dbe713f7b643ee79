#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "scalar.hpp"
#include "summation.hpp"
#include "random.hpp"
#include "parallel.hpp"
#include "ifs.hpp"
#include "transfer.hpp"
#include "cycles.hpp"
#include "quadrature.hpp"
#include "fourier.hpp"
#include "pathspace.hpp"
#include "measure.hpp"
