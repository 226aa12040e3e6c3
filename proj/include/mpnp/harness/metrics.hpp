#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mpnp::harness {

double compute_accuracy(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth);

/// Mean over parts of TP / (TP + FP + FN); parts absent from both vectors are skipped.
double compute_miou(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth, std::size_t num_parts);

struct BinaryConfusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Class 1 is the positive class.
BinaryConfusion binary_confusion(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth);

struct BinaryScores {
  double f_measure = 0.0;
  double mcc = 0.0;
};

/// F = 2TP / (2TP + FP + FN), MCC by the usual formula; zero denominators give 0.
BinaryScores f_mcc_from_confusion(const BinaryConfusion& c);
BinaryScores compute_f_mcc(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth);

/// Scores of one prediction vector. f_measure and mcc are NaN for non-binary tasks.
struct MetricsRecord {
  double accuracy = 0.0;
  double miou = 0.0;
  double f_measure = 0.0;
  double mcc = 0.0;
};

MetricsRecord compute_metrics(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                              std::size_t num_classes);

/// Elementwise mean of records (NaN fields stay NaN).
MetricsRecord mean_of(std::span<const MetricsRecord> records);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};
MeanStd mean_std(std::span<const double> values);

}  // namespace mpnp::harness
