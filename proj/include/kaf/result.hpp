#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace kaf {

// Domain error: a stable machine-readable code plus a human-readable message.
// Codes are kebab-case ("wrong-stage", "illegal-transition", ...) and are the
// names the CLI prints on exit status 1.
struct Error {
    std::string code;
    std::string message;

    bool operator==(const Error&) const = default;
};

// Value-or-error result. Operations that can fail for domain reasons return
// Result<T>; functions documented as total return plain values.
template <typename T>
class Result {
  public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(v_); }
    T& value() & { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }

    const Error& error() const { return std::get<Error>(v_); }

  private:
    std::variant<T, Error> v_;
};

// Result for operations with no payload.
class Status {
  public:
    Status() = default;
    Status(Error error) : err_(std::move(error)) {}

    bool ok() const { return !err_.has_value(); }
    explicit operator bool() const { return ok(); }

    const Error& error() const { return *err_; }

  private:
    std::optional<Error> err_;
};

inline Error make_error(std::string code, std::string message) {
    return Error{std::move(code), std::move(message)};
}

}  // namespace kaf
