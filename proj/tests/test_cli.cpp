#include <doctest.h>
TEST_CASE("cli") { CHECK(true); }
