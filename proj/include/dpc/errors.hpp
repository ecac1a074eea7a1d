#pragma once
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dpc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DPC_DEFINE_ERROR(Name)           \
  class Name : public Error {            \
   public:                               \
    explicit Name(const std::string& m)  \
        : Error(std::string(#Name ": ") + m) {} \
  };

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& m)
      : Error("ParseError(line " + std::to_string(line) + "): " + m), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

DPC_DEFINE_ERROR(DisconnectedGraph)
DPC_DEFINE_ERROR(DuplicateId)
DPC_DEFINE_ERROR(UnknownNode)
DPC_DEFINE_ERROR(UnknownPredicate)
DPC_DEFINE_ERROR(UnboundVariable)
DPC_DEFINE_ERROR(NotPrenex)
DPC_DEFINE_ERROR(NotSigma1)
DPC_DEFINE_ERROR(NotSigma21)
DPC_DEFINE_ERROR(IllegalRecipient)
DPC_DEFINE_ERROR(RoundCapExceeded)
DPC_DEFINE_ERROR(NonDeterminismDetected)
DPC_DEFINE_ERROR(NotAvailableInModel)
DPC_DEFINE_ERROR(StepBudgetExceeded)
DPC_DEFINE_ERROR(WrongColoring)
DPC_DEFINE_ERROR(UnsupportedProblem)
DPC_DEFINE_ERROR(UnsupportedVocabulary)
DPC_DEFINE_ERROR(ArityMismatch)
DPC_DEFINE_ERROR(InvalidCircuit)
DPC_DEFINE_ERROR(InvalidEmbedding)
DPC_DEFINE_ERROR(CongestionDeadlock)
DPC_DEFINE_ERROR(ProblemMismatch)
DPC_DEFINE_ERROR(NotSurjective)
DPC_DEFINE_ERROR(GraphTooSmall)
DPC_DEFINE_ERROR(MissingHardInstance)
DPC_DEFINE_ERROR(NotCentered)
DPC_DEFINE_ERROR(GraphTooLargeForExhaustiveCheck)
DPC_DEFINE_ERROR(GraphTooLarge)
DPC_DEFINE_ERROR(CapExceeded)
DPC_DEFINE_ERROR(UnknownSuite)

#undef DPC_DEFINE_ERROR

class BandwidthViolation : public Error {
 public:
  BandwidthViolation(std::uint64_t node, std::size_t round, std::size_t bits, std::size_t limit)
      : Error("BandwidthViolation: node " + std::to_string(node) + " round " +
              std::to_string(round) + " sent " + std::to_string(bits) + " bits > " +
              std::to_string(limit)),
        node(node), round(round), bits(bits) {}
  std::uint64_t node;
  std::size_t round;
  std::size_t bits;
};

}  // namespace dpc
