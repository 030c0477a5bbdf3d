#ifndef MATFUN_MATFUN_HPP
#define MATFUN_MATFUN_HPP

#include "critical.hpp"
#include "entire.hpp"
#include "error.hpp"
#include "io.hpp"
#include "jordan.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"
#include "solver.hpp"

#endif
