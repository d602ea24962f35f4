// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/rng.hpp"

#include <sstream>

#include "qsmiles/errors.hpp"

namespace qsmiles {

std::string Rng::serialize() const {
  std::ostringstream os;
  os << gen_ << ' ' << (have_spare_ ? 1 : 0);
  if (have_spare_) {
    os.precision(17);
    os << ' ' << spare_;
  }
  return os.str();
}

void Rng::deserialize(const std::string& text) {
  std::istringstream is(text);
  int spare_flag = 0;
  is >> gen_ >> spare_flag;
  if (is.fail()) throw load_error("rng: malformed engine state");
  have_spare_ = spare_flag != 0;
  if (have_spare_) {
    is >> spare_;
    if (is.fail()) throw load_error("rng: malformed spare value");
  }
}

}  // namespace qsmiles
