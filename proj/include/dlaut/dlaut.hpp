#ifndef DLAUT_DLAUT_HPP
#define DLAUT_DLAUT_HPP

#include "dlaut/errors.hpp"
#include "dlaut/scalars.hpp"
#include "dlaut/laurent.hpp"
#include "dlaut/diffop.hpp"
#include "dlaut/autgroup.hpp"
#include "dlaut/format.hpp"
#include "dlaut/expr.hpp"
#include "dlaut/oracles.hpp"
#include "dlaut/random.hpp"

#endif  // DLAUT_DLAUT_HPP
