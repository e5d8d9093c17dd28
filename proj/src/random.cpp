#include "fpa/random.hpp"

#include <vector>

namespace fpa {

laurent::LaurentSeries random_series(Rng& rng, linalg::PrimeField field, int lo, int prec) {
  if (prec <= lo) return laurent::LaurentSeries::zero(field, prec);
  std::vector<linalg::Residue> coeffs(static_cast<std::size_t>(prec - lo));
  for (auto& c : coeffs) c = static_cast<linalg::Residue>(rng.below(field.p()));
  return laurent::LaurentSeries::from_coefficients(field, lo, coeffs, prec);
}

laurent::SeriesVector random_vector(Rng& rng, linalg::PrimeField field, std::size_t d, int lo, int prec) {
  std::vector<laurent::LaurentSeries> comps;
  for (std::size_t i = 0; i < d; ++i) comps.push_back(random_series(rng, field, lo, prec));
  return laurent::SeriesVector(std::move(comps));
}

}  // namespace fpa
