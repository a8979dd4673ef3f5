#pragma once

#include "fiskit/defuzz.hpp"
#include "fiskit/engine.hpp"
#include "fiskit/error.hpp"
#include "fiskit/fisdsl.hpp"
#include "fiskit/membership.hpp"
