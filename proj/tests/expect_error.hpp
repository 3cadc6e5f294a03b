#pragma once

#include <gtest/gtest.h>

#include "actsem/error.hpp"

// Asserts that `stmt` throws actsem::Error carrying `expected`.
#define EXPECT_ERROR_CODE(stmt, expected)                                                   \
    do {                                                                                    \
        try {                                                                               \
            stmt;                                                                           \
            ADD_FAILURE() << "no exception from " #stmt;                                    \
        } catch (const actsem::Error& e) {                                                  \
            EXPECT_EQ(e.code(), expected) << e.what();                                      \
        }                                                                                   \
    } while (0)
