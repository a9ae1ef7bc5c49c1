#ifndef FINORIENT_ERRORS_HPP
#define FINORIENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace finorient {

// Raised for any problem with user-supplied data (malformed files,
// inconsistent inputs, model/coding mismatches). The CLI maps it to
// exit code 2; logic_error maps to exit code 3.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline DataError parse_error(const std::string& source, std::size_t line_no,
                             const std::string& what) {
  return DataError(source + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace finorient

#endif
