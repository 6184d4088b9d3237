#pragma once

#include <gtest/gtest.h>

#include "physarum/error.hpp"

#define EXPECT_ERROR_KIND(statement, expected_kind)                            \
  do {                                                                         \
    try {                                                                      \
      statement;                                                               \
      ADD_FAILURE() << "expected " << physarum::to_string(expected_kind);      \
    } catch (const physarum::Error& caught_) {                                 \
      EXPECT_EQ(caught_.kind(), expected_kind) << caught_.what();              \
    }                                                                          \
  } while (0)
