#ifndef DIMWIT_DIMWIT_HPP_
#define DIMWIT_DIMWIT_HPP_

#include "dimwit/errors.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/witness.hpp"
#include "dimwit/bound_result.hpp"
#include "dimwit/classical.hpp"
#include "dimwit/seesaw.hpp"
#include "dimwit/counts.hpp"
#include "dimwit/photonic.hpp"
#include "dimwit/certify.hpp"
#include "dimwit/io.hpp"

#endif // DIMWIT_DIMWIT_HPP_
