#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skintone {

enum class Errc {
  InvalidArgument,
  DegenerateAngle,
  DegenerateHistogram,
  Io,
  Decode,
  InvalidSide,
  ZeroChannel,
  InvalidKernel,
  MissingMaskDir,
  EmptyInput,
  NoOverlap,
  InvalidRatios,
  EmptyTestSet,
  EmptyTrainSet,
  OutOfGamut,
  Parse,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace skintone
