#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace r2o {

enum class ErrorCode {
  InvalidArgument,
  // codec
  InvalidPayload,
  CapacityExceeded,
  NotAQrSymbol,
  DecodeFailure,
  FragmentConflict,
  TargetTooSmall,
  InvalidImage,
  // cache
  UnsupportedVersion,
  // store
  StoreUnavailable,
  PayloadTooLarge,
  NotFound,
  BindFailure,
  // firstparty
  AlbumNotFound,
  PhotoNotFound,
  UnsupportedMediaType,
  // rewriter / core
  SpanMismatch,
  PageUnreachable,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace r2o
