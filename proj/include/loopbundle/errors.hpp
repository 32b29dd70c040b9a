#pragma once

#include <stdexcept>
#include <string>

namespace loopbundle {

enum class ErrorKind {
  DomainSingularity,
  OutOfDomain,
  NoSolutionInChart,
  UnknownKind,
  PoleSingularity,
  SingularFrame,
  StepUnderflow,
  NotInOverlap,
  ProjectionSingular,
  PartitionInvalid,
  UnknownSuite,
  UnknownLoop,
  ReportWriteFailure,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DomainSingularity: return "DomainSingularity";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NoSolutionInChart: return "NoSolutionInChart";
    case ErrorKind::UnknownKind: return "UnknownKind";
    case ErrorKind::PoleSingularity: return "PoleSingularity";
    case ErrorKind::SingularFrame: return "SingularFrame";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NotInOverlap: return "NotInOverlap";
    case ErrorKind::ProjectionSingular: return "ProjectionSingular";
    case ErrorKind::PartitionInvalid: return "PartitionInvalid";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::UnknownLoop: return "UnknownLoop";
    case ErrorKind::ReportWriteFailure: return "ReportWriteFailure";
  }
  return "?";
}

class LoopError : public std::runtime_error {
 public:
  LoopError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace loopbundle
