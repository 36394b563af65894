#include "devjudge/backend.hpp"

namespace devjudge {

ChatReply JudgmentBackend::chat(std::string_view system_prompt, std::string_view user_prompt) {
  auto reply = complete(system_prompt, user_prompt);
  std::lock_guard lock(meter_mutex_);
  meter_ += reply.usage;
  return reply;
}

UsageLedger JudgmentBackend::usage() const {
  std::lock_guard lock(meter_mutex_);
  return meter_;
}

}  // namespace devjudge
