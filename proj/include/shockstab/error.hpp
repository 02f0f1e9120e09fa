#ifndef SHOCKSTAB_ERROR_HPP
#define SHOCKSTAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace shockstab {

/// Error categories; values match the process exit codes of the CLI
/// (0 success, 1 verdict failure, 2 input error, 3 internal error).
enum class ErrorCode : int {
    input = 2,
    internal = 3,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline Error input_error(const std::string& what) { return Error(ErrorCode::input, what); }
inline Error internal_error(const std::string& what) { return Error(ErrorCode::internal, what); }

}  // namespace shockstab

#endif
