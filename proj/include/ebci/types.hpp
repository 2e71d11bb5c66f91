#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ebci {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Label { NonTarget = -1, Target = +1 };

inline int label_sign(Label l) { return l == Label::Target ? +1 : -1; }

// Channels used for classification, in the fixed order every epoch follows.
inline const std::array<std::string, 8>& classification_channels() {
  static const std::array<std::string, 8> chans = {
      "Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8"};
  return chans;
}

inline const std::array<std::string, 2>& eog_channels() {
  static const std::array<std::string, 2> chans = {"HEOG", "VEOG"};
  return chans;
}

inline bool is_eog_channel(const std::string& name) {
  return name == "HEOG" || name == "VEOG";
}

}  // namespace ebci
