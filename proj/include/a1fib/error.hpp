#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace a1fib {

// All computational failures carry a stable machine-readable code. The CLI
// maps codes to exit classes, tests assert on them.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
    throw Error(code, detail);
}

// Raised when a k-th root does not exist in the current field instance.
// `radicand` is the printed scalar whose root was requested.
class ExtensionRequired : public Error {
public:
    ExtensionRequired(int k, const std::string& radicand)
        : Error("extension_required",
                "no " + std::to_string(k) + "-th root of " + radicand + " in the current field"),
          k_(k), radicand_(radicand) {}

    int degree() const noexcept { return k_; }
    const std::string& radicand() const noexcept { return radicand_; }

private:
    int k_;
    std::string radicand_;
};

} // namespace a1fib
