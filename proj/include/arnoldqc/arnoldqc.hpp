#pragma once

#include "arnoldqc/catastrophe.hpp"
#include "arnoldqc/error.hpp"
#include "arnoldqc/polynomial.hpp"
#include "arnoldqc/potential.hpp"
#include "arnoldqc/roots.hpp"
#include "arnoldqc/spectrum.hpp"
#include "arnoldqc/tridiagonal.hpp"
