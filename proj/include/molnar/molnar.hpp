#pragma once

#include "molnar/elliptic.hpp"
#include "molnar/elliptic_kernel.hpp"
#include "molnar/errors.hpp"
#include "molnar/generator.hpp"
#include "molnar/matmean.hpp"
#include "molnar/matrix_io.hpp"
#include "molnar/quadrature.hpp"
#include "molnar/rep_fun.hpp"
#include "molnar/strip.hpp"
#include "molnar/validation.hpp"
#include "molnar/verify.hpp"
