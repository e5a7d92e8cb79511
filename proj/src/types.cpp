#include "mmd/types.hpp"

#include <stdexcept>

namespace mmd {

PairedDataset::PairedDataset(SampleMatrix x, SampleMatrix y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.rows()) {
    throw std::invalid_argument("PairedDataset: X and Y must have the same number of rows");
  }
  if (x_.cols() != y_.cols()) {
    throw std::invalid_argument("PairedDataset: X and Y must have the same dimension");
  }
  if (x_.rows() < 2) throw std::invalid_argument("PairedDataset: need at least 2 pairs");
  if (x_.cols() < 1) throw std::invalid_argument("PairedDataset: need dimension >= 1");
  if (!x_.allFinite() || !y_.allFinite()) {
    throw std::invalid_argument("PairedDataset: non-finite entries");
  }
}

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::Mmmd: return "mmmd";
    case TestMethod::GammaFamily: return "gamma";
    case TestMethod::MultiKernel: return "mmmmd";
    case TestMethod::PermMmd: return "mmd-perm";
    case TestMethod::BlockMmd: return "block";
    case TestMethod::LinearMmd: return "linear";
    case TestMethod::CrossMmd: return "cross";
  }
  return "unknown";
}

}  // namespace mmd
