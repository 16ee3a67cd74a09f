#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace walshflow {

enum class Errc {
  invalid_params,
  negative_radius,
  empty_window,
  out_of_window,
  negative_value,
  too_short,
  not_a_preimage,
  incomplete_block,
  window_too_large,
  lattice_mismatch,
  out_of_domain,
  too_few_samples,
  sparse_cells,
  config_error,
};

std::string_view to_string(Errc code);

// All recoverable failures in the library are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace walshflow
