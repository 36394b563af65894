#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace devjudge {

enum class EvidenceSource { LocatedFile, FileContent, SearchHit, TrajectorySteps, MemoryRecall };

std::string_view to_string(EvidenceSource source) noexcept;

struct EvidenceRef {
  EvidenceSource source = EvidenceSource::LocatedFile;
  std::string path_or_ref;
  friend bool operator==(const EvidenceRef&, const EvidenceRef&) = default;
};

enum class Decision { Satisfied, Unsatisfied };

struct Verdict {
  int requirement_id = 0;
  Decision decision = Decision::Unsatisfied;
  double confidence = 0.0;
  std::string justification;
  std::vector<EvidenceRef> evidence_used;

  [[nodiscard]] bool satisfied() const noexcept { return decision == Decision::Satisfied; }
};

}  // namespace devjudge
