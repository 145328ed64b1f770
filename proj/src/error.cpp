#include "r2o/error.hpp"

namespace r2o {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPayload: return "InvalidPayload";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::NotAQrSymbol: return "NotAQrSymbol";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::FragmentConflict: return "FragmentConflict";
    case ErrorCode::TargetTooSmall: return "TargetTooSmall";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::AlbumNotFound: return "AlbumNotFound";
    case ErrorCode::PhotoNotFound: return "PhotoNotFound";
    case ErrorCode::UnsupportedMediaType: return "UnsupportedMediaType";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::PageUnreachable: return "PageUnreachable";
  }
  return "Unknown";
}

}  // namespace r2o
