// single compilation of the amalgamated Catch2 v3 implementation (provides main)
#include <catch2/catch_amalgamated.cpp>
