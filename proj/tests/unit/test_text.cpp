#include "doctest.h"

#include <random>

#include "devjudge/text.hpp"

using namespace devjudge;

TEST_CASE("case folding and containment") {
  CHECK(text::to_lower("MiXeD 123") == "mixed 123");
  CHECK(text::iequals("Gray", "gRAY"));
  CHECK_FALSE(text::iequals("gray", "grey"));
  CHECK(text::icontains("Traceback (most recent call last)", "TRACEBACK"));
  CHECK(text::icontains("anything", ""));
  CHECK_FALSE(text::icontains("short", "longer needle"));
}

TEST_CASE("trim and split_lines") {
  CHECK(text::trim("  \t a b \r\n") == "a b");
  CHECK(text::trim(" \n ").empty());
  CHECK(text::split_lines("a\r\nb\n\nc") == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(text::split_lines("a\n") == std::vector<std::string>{"a"});
  CHECK(text::split_lines("").empty());
}

TEST_CASE("dedent strips the shared indent only") {
  CHECK(text::dedent("\n    one\n      two\n\n    three\n  ") == "one\n  two\n\nthree");
  CHECK(text::dedent("flat") == "flat");
}

TEST_CASE("utf8 boundaries never split a code point") {
  const std::string s = "a\xC3\xA9" "b\xE2\x80\xA6" "c";  // a é b … c
  CHECK(text::utf8_floor(s, 2) == 1);
  CHECK(text::utf8_ceil(s, 2) == 3);
  CHECK(text::utf8_floor(s, 5) == 4);
  CHECK(text::utf8_ceil(s, 5) == 7);
  CHECK(text::utf8_floor(s, 100) == s.size());

  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto pos = std::uniform_int_distribution<std::size_t>(0, s.size())(rng);
    CHECK(text::is_valid_utf8(s.substr(0, text::utf8_floor(s, pos))));
    CHECK(text::is_valid_utf8(s.substr(text::utf8_ceil(s, pos))));
  }
}

TEST_CASE("is_valid_utf8") {
  CHECK(text::is_valid_utf8("plain ascii"));
  CHECK(text::is_valid_utf8("\xE2\x80\xA6"));
  CHECK_FALSE(text::is_valid_utf8("\xE2\x80"));
  CHECK(text::is_valid_utf8("\xE2\x80", true));
  CHECK_FALSE(text::is_valid_utf8("\xC0\x80"));
  CHECK_FALSE(text::is_valid_utf8("\xFF"));
}

TEST_CASE("join and format_number") {
  CHECK(text::join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(text::join({}, ",").empty());
  CHECK(text::format_number(97.6431, 2) == "97.64");
  CHECK(text::format_number(2.0) == "2");
  CHECK(text::format_number(-0.0000001, 3) == "0");
}
