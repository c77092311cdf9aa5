#pragma once

#include <span>
#include <vector>

#include "vextrace/common.hpp"
#include "vextrace/sampled_field.hpp"

namespace vextrace {

/// Modular rho(u) = sum w |u|^{p} over the grid. Requires p >= 1 samplewise.
double modular(const SampledField& u, const SampledField& p);

/// Luxemburg norm: the unique lambda > 0 with modular(u/lambda) = 1, or 0 for
/// the zero field. Bracketing plus safeguarded bisection/secant iteration to
/// relative tolerance 1e-12.
double luxemburg_norm(const SampledField& u, const SampledField& p);

/// W^{1,p(x)} norm from the combined modular sum w (|u|^p + |grad u|^p).
double sobolev_norm(const SampledField& u, std::span<const SampledField> grad_u,
                    const SampledField& p);

/// J(u) = sum w (|grad u|^p + h |u|^p); may be negative when h < 0.
double coercive_modular(const SampledField& u, std::span<const SampledField> grad_u,
                        const SampledField& p, const SampledField& h);

/// Sampled coercivity probe: min of J over `samples` pseudo-random fields
/// normalized to unit Sobolev norm. A heuristic witness, not a proof.
double coercivity_probe(const SampledField& p, const SampledField& h, int samples,
                        unsigned long long seed);

struct HolderCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// ||fg||_s <= ((s/p)^+ + (s/q)^+) ||f||_p ||g||_q with 1/s = 1/p + 1/q.
HolderCheck holder_check(const SampledField& f, const SampledField& g,
                         const SampledField& p, const SampledField& q);

/// d_n = rho(f_n) - rho(f - f_n) - rho(f) for each member of the sequence.
std::vector<double> brezis_lieb_defect(std::span<const SampledField> f_seq,
                                       const SampledField& f, const SampledField& p);

}  // namespace vextrace
