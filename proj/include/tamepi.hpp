#ifndef TAMEPI_HPP_
#define TAMEPI_HPP_

#include "tamepi/action.hpp"
#include "tamepi/error.hpp"
#include "tamepi/moduli.hpp"
#include "tamepi/perm_group.hpp"
#include "tamepi/rational.hpp"
#include "tamepi/serialize.hpp"
#include "tamepi/synthesis.hpp"
#include "tamepi/tree.hpp"
#include "tamepi/word.hpp"

#endif  // TAMEPI_HPP_
