#pragma once

#include <doctest.h>

#include "fuzzyref/error.hpp"

/// Kind of the fuzzyref::Error thrown by f; fails the test if none is.
template <class F>
fuzzyref::ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const fuzzyref::Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return fuzzyref::ErrorKind::Io;
}
