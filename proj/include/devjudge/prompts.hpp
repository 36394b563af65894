#pragma once

#include <string>
#include <string_view>

namespace devjudge::prompts {

std::string_view judge_system();
std::string_view locate_system();
std::string_view retrieve_system();
std::string_view planning_system();

std::string ask_user(std::string_view criteria, std::string_view evidence);
std::string locate_user(std::string_view criteria, std::string_view workspace_info);
std::string retrieve_user(std::string_view criteria, std::string_view trajectory);
std::string planning_user(std::string_view criteria, std::string_view modules);

/// Bytes the retrieve prompt costs before the trajectory slot is filled.
std::size_t retrieve_overhead(std::string_view criteria);

}  // namespace devjudge::prompts
