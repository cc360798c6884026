#ifndef NEARQUAD_NEARQUAD_HPP
#define NEARQUAD_NEARQUAD_HPP

#include "nearquad/errors.hpp"
#include "nearquad/experiments.hpp"
#include "nearquad/io.hpp"
#include "nearquad/moments.hpp"
#include "nearquad/oracle.hpp"
#include "nearquad/rulegen.hpp"
#include "nearquad/solver.hpp"
#include "nearquad/special.hpp"

#endif  // NEARQUAD_NEARQUAD_HPP
