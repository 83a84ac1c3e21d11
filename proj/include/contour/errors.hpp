#pragma once

#include <stdexcept>
#include <string>

namespace contour {

enum class errc {
    format,
    range,
    not_found,
    duplicate,
    sealed,
    empty_batch,
    rejected,
    chain_mismatch,
    invalid_header,
    invalid_target,
    not_a_commitment,
    not_committed,
    not_confirmed,
    untrusted_state,
    integrity,
    io,
    config,
    malformed_stanza,
};

// Hard failure: caller broke a precondition or an external input is unusable.
// Soft verification outcomes are enums, not exceptions.
class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace contour
