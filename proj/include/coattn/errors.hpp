#pragma once

#include <stdexcept>
#include <string>

namespace coattn {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or extent mismatch between operands. Message names both shapes.
struct DimensionError : Error {
  using Error::Error;
};

// Input outside an operation's domain (e.g. empty softmax input).
struct DomainError : Error {
  using Error::Error;
};

// A value became NaN or infinite.
struct NumericError : Error {
  using Error::Error;
};

// Token id outside the vocabulary.
struct VocabularyError : Error {
  using Error::Error;
};

// A statement is empty after padding is stripped.
struct EmptyStatementError : Error {
  using Error::Error;
};

// A vector with near-zero norm reached a normalizing operation.
struct DegenerateVectorError : Error {
  using Error::Error;
};

// Ranking loss invoked without positives or without negatives.
struct LossDefinitionError : Error {
  using Error::Error;
};

// All symbol probabilities are zero where a weighted mean is requested.
struct DegenerateProbabilityError : Error {
  using Error::Error;
};

// Dataset file failed to parse or violates a manifest invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Not enough candidates to draw the requested negatives.
struct SamplingError : Error {
  using Error::Error;
};

// Too few samples to build the requested folds.
struct SplitError : Error {
  using Error::Error;
};

// Metric requested over an empty result set.
struct MetricError : Error {
  using Error::Error;
};

// Evaluation could not be completed (pool underflow, scoring failure).
struct EvaluationError : Error {
  using Error::Error;
};

// Training aborted (non-finite gradient, module failure mid-epoch).
struct TrainingError : Error {
  using Error::Error;
};

// Checkpoint file malformed or inconsistent with the model.
struct CheckpointError : Error {
  using Error::Error;
};

// Gradient checking could not evaluate the target function.
struct EvaluationAbortError : Error {
  using Error::Error;
};

}  // namespace coattn
