#pragma once

#include <synrag/error.hpp>

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

inline std::filesystem::path data_dir() { return SYNRAG_DATA_DIR; }

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("synrag_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

template <typename F>
synrag::ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const synrag::Error& e) {
        return e.code();
    }
    FAIL("expected synrag::Error");
    return synrag::ErrorCode::IoError;
}

}  // namespace testutil

#define CHECK_ERROR_CODE(expr, expected_code) \
    CHECK(testutil::error_code_of([&] { (void)(expr); }) == (expected_code))
