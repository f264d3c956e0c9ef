#ifndef PSTAT_SIMILARITY_HPP_
#define PSTAT_SIMILARITY_HPP_

#include "pstat/anova.hpp"

namespace pstat {

// Mean over terms of min(u_i, v_i) / max(u_i, v_i). Result lies in (0,1]
// and is 1 exactly when the vectors are equal.
//
// Both vectors must list the same terms in the same order (AlignmentError)
// and every value must be strictly positive and finite (DomainError).
double similarity(const anova::SignificanceVector& u, const anova::SignificanceVector& v);

}  // namespace pstat

#endif  // PSTAT_SIMILARITY_HPP_
