#include "fpa/families.hpp"

#include "fpa/error.hpp"

namespace fpa::families {

using sparse::TapEntry;

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"trivial", "tap", "dropping-tap", "chain-3"};
  return all;
}

action::ActionSpec spec(std::string_view name) {
  const linalg::PrimeField f2(2);
  if (name == "trivial") {
    return {f2, 2, sparse::SparsePerturbation(f2, 2), "trivial", "empty seed: phi(x) = id"};
  }
  if (name == "tap") {
    return {f2, 2, sparse::SparsePerturbation(f2, 2, {TapEntry{{0, 0}, {1, 0}, 1}}), "tap",
            "coefficient 0 of u1 added to u2 at t^0"};
  }
  if (name == "dropping-tap") {
    return {f2, 2, sparse::SparsePerturbation(f2, 2, {TapEntry{{0, 0}, {1, -1}, 1}}), "dropping-tap",
            "coefficient 0 of u1 added to u2 at t^-1"};
  }
  if (name == "chain-3") {
    const linalg::PrimeField f3(3);
    return {f3, 3,
            sparse::SparsePerturbation(f3, 3, {TapEntry{{0, 0}, {1, 0}, 1}, TapEntry{{1, 0}, {2, 0}, 1}}),
            "chain-3", "cascade u1 -> u2 -> u3 at t^0"};
  }
  throw Error(ErrorKind::UnknownExample, "unknown example '" + std::string(name) +
                                             "' (known: trivial, tap, dropping-tap, chain-3)");
}

}  // namespace fpa::families
