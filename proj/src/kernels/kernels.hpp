#pragma once

#include <cstdint>

#include "mflab/multfun.hpp"

namespace mflab::kernels {

/// f(lo..hi) into out, OpenMP over n; each n walks its spf chain.
void eval_int(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
              std::int8_t* out);
void eval_complex(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                  const SpfTable& table, cplx* out);

}  // namespace mflab::kernels
