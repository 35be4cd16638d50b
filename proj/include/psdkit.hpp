#pragma once

#include "psdkit/errors.hpp"
#include "psdkit/matrix.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/composite.hpp"
#include "psdkit/random.hpp"
#include "psdkit/positivity.hpp"
#include "psdkit/schur.hpp"
#include "psdkit/bloch.hpp"
#include "psdkit/channel.hpp"
#include "psdkit/toeplitz.hpp"
#include "psdkit/relax.hpp"
#include "psdkit/io.hpp"
#include "psdkit/selftest.hpp"
