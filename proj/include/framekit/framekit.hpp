#ifndef FRAMEKIT_FRAMEKIT_HPP
#define FRAMEKIT_FRAMEKIT_HPP

#include "framekit/error.hpp"
#include "framekit/frame.hpp"
#include "framekit/generators.hpp"
#include "framekit/json_io.hpp"
#include "framekit/linalg.hpp"
#include "framekit/rng.hpp"
#include "framekit/unconditionality.hpp"
#include "framekit/verify.hpp"
#include "framekit/weight_split.hpp"

#endif  // FRAMEKIT_FRAMEKIT_HPP
