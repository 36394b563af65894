#pragma once

#include <atomic>
#include <deque>
#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "devjudge/backend.hpp"

namespace testing_support {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(DEVJUDGE_TEST_DATA); }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("devjudge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

// Backend that answers from a queue (the last reply repeats) or a callback,
// recording every prompt it receives.
class ScriptedBackend final : public devjudge::JudgmentBackend {
 public:
  using Responder = std::function<std::string(std::string_view system, std::string_view user)>;

  explicit ScriptedBackend(std::vector<std::string> replies, std::size_t budget = 400000)
      : replies_(replies.begin(), replies.end()), budget_(budget) {}
  explicit ScriptedBackend(Responder fn, std::size_t budget = 400000) : fn_(std::move(fn)), budget_(budget) {}

  std::size_t context_budget() const noexcept override { return budget_; }
  std::string name() const override { return "scripted"; }

  std::vector<std::pair<std::string, std::string>> prompts;
  devjudge::UsageLedger per_call{10, 2, 0.001, 0.0};

 protected:
  devjudge::ChatReply complete(std::string_view system, std::string_view user) override {
    prompts.emplace_back(system, user);
    std::string text;
    if (fn_) {
      text = fn_(system, user);
    } else if (!replies_.empty()) {
      text = replies_.front();
      if (replies_.size() > 1) replies_.pop_front();
    }
    return {text, per_call};
  }

 private:
  Responder fn_;
  std::deque<std::string> replies_;
  std::size_t budget_;
};

}  // namespace testing_support
