#include "skintone/error.hpp"

namespace skintone {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateAngle: return "DegenerateAngle";
    case Errc::DegenerateHistogram: return "DegenerateHistogram";
    case Errc::Io: return "IoError";
    case Errc::Decode: return "DecodeError";
    case Errc::InvalidSide: return "InvalidSide";
    case Errc::ZeroChannel: return "ZeroChannel";
    case Errc::InvalidKernel: return "InvalidKernel";
    case Errc::MissingMaskDir: return "MissingMaskDir";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NoOverlap: return "NoOverlap";
    case Errc::InvalidRatios: return "InvalidRatios";
    case Errc::EmptyTestSet: return "EmptyTestSet";
    case Errc::EmptyTrainSet: return "EmptyTrainSet";
    case Errc::OutOfGamut: return "OutOfGamut";
    case Errc::Parse: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

}  // namespace skintone
