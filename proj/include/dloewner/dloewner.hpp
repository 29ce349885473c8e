#ifndef DLOEWNER_DLOEWNER_HPP
#define DLOEWNER_DLOEWNER_HPP

#include "delay_loewner.hpp"
#include "error.hpp"
#include "expression.hpp"
#include "h2metrics.hpp"
#include "irka.hpp"
#include "job.hpp"
#include "lambertw.hpp"
#include "loewner.hpp"
#include "matrix_market.hpp"
#include "model.hpp"
#include "model_io.hpp"
#include "oracle.hpp"
#include "shift_spec.hpp"
#include "spectral.hpp"
#include "types.hpp"
#include "version.hpp"

#endif /* DLOEWNER_DLOEWNER_HPP */
