#pragma once

#include "lzpenalty/arithmetic_coder.hpp"
#include "lzpenalty/baseline_penalties.hpp"
#include "lzpenalty/bench.hpp"
#include "lzpenalty/duality.hpp"
#include "lzpenalty/eval.hpp"
#include "lzpenalty/lz_match.hpp"
#include "lzpenalty/lz_penalty.hpp"
#include "lzpenalty/lzss.hpp"
#include "lzpenalty/sampler.hpp"
#include "lzpenalty/sweep.hpp"
#include "lzpenalty/token_io.hpp"
#include "lzpenalty/toy_lm.hpp"
#include "lzpenalty/types.hpp"
