#pragma once

#include "colcomm/gadgets.hpp"
#include "colcomm/instances.hpp"
#include "colcomm/io.hpp"
#include "colcomm/protocols.hpp"
#include "colcomm/rng.hpp"
#include "colcomm/unfold.hpp"
