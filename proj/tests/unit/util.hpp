#pragma once

#include <doctest.h>

#include <optional>

#include "shaderevo/error.hpp"

/// Error code thrown by `fn`, or nullopt when it returns normally.
template <class Fn>
std::optional<shaderevo::ErrorCode> error_code(Fn&& fn) {
    try {
        fn();
    } catch (const shaderevo::Error& e) {
        return e.code();
    }
    return std::nullopt;
}
