#pragma once

#include "ucode/baselines.hpp"
#include "ucode/bayes_code.hpp"
#include "ucode/bits.hpp"
#include "ucode/codec.hpp"
#include "ucode/container.hpp"
#include "ucode/error.hpp"
#include "ucode/genparam.hpp"
#include "ucode/integer_codes.hpp"
#include "ucode/measures.hpp"
#include "ucode/numeric.hpp"
#include "ucode/redundancy_lab.hpp"
#include "ucode/rng.hpp"
#include "ucode/sfe_coder.hpp"
