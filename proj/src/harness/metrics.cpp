#include "mpnp/harness/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mpnp::harness {
namespace {

void check_pair(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth) {
  if (pred.empty()) throw std::invalid_argument("metrics: empty input");
  if (pred.size() != truth.size()) throw std::invalid_argument("metrics: prediction and truth lengths differ");
}

}  // namespace

double compute_accuracy(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth) {
  check_pair(pred, truth);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double compute_miou(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth, std::size_t num_parts) {
  check_pair(pred, truth);
  std::vector<std::size_t> tp(num_parts, 0), fp(num_parts, 0), fn(num_parts, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] >= num_parts || truth[i] >= num_parts) throw std::out_of_range("compute_miou: label out of range");
    if (pred[i] == truth[i]) {
      ++tp[pred[i]];
    } else {
      ++fp[pred[i]];
      ++fn[truth[i]];
    }
  }
  double total = 0.0;
  std::size_t parts = 0;
  for (std::size_t p = 0; p < num_parts; ++p) {
    const std::size_t denom = tp[p] + fp[p] + fn[p];
    if (denom == 0) continue;
    total += static_cast<double>(tp[p]) / static_cast<double>(denom);
    ++parts;
  }
  return total / static_cast<double>(parts);
}

BinaryConfusion binary_confusion(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth) {
  check_pair(pred, truth);
  BinaryConfusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] > 1 || truth[i] > 1) throw std::invalid_argument("compute_f_mcc: labels must be binary");
    if (pred[i] == 1) (truth[i] == 1 ? c.tp : c.fp)++;
    else (truth[i] == 1 ? c.fn : c.tn)++;
  }
  return c;
}

BinaryScores f_mcc_from_confusion(const BinaryConfusion& c) {
  const auto tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
  BinaryScores s;
  const double f_denom = 2 * tp + fp + fn;
  s.f_measure = f_denom > 0 ? 2 * tp / f_denom : 0.0;
  const double m_denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  s.mcc = m_denom > 0 ? (tp * tn - fp * fn) / std::sqrt(m_denom) : 0.0;
  return s;
}

BinaryScores compute_f_mcc(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth) {
  return f_mcc_from_confusion(binary_confusion(pred, truth));
}

MetricsRecord compute_metrics(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                              std::size_t num_classes) {
  MetricsRecord m;
  m.accuracy = compute_accuracy(pred, truth);
  m.miou = compute_miou(pred, truth, num_classes);
  if (num_classes == 2) {
    const auto s = compute_f_mcc(pred, truth);
    m.f_measure = s.f_measure;
    m.mcc = s.mcc;
  } else {
    m.f_measure = m.mcc = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

MetricsRecord mean_of(std::span<const MetricsRecord> records) {
  if (records.empty()) throw std::invalid_argument("mean_of: no records");
  MetricsRecord m{};
  for (const auto& r : records) {
    m.accuracy += r.accuracy;
    m.miou += r.miou;
    m.f_measure += r.f_measure;
    m.mcc += r.mcc;
  }
  const auto n = static_cast<double>(records.size());
  m.accuracy /= n;
  m.miou /= n;
  m.f_measure /= n;
  m.mcc /= n;
  return m;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_std: no values");
  MeanStd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  for (double v : values) out.std += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(out.std / static_cast<double>(values.size()));
  return out;
}

}  // namespace mpnp::harness
