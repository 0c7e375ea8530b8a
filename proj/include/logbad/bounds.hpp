#pragma once

#include <vector>

#include "logbad/alpha.hpp"

namespace logbad {

struct SumBoundReport {
    Int q, Q;
    Rat sigma_lo, sigma_hi;  // bracket of sigma(alpha; q, Q)
    Rat bound;               // log-log upper bound, see sigma_bound
    Rat ratio;               // sigma_hi / bound
    bool ok = false;         // sigma_hi <= bound
};

struct CountReport {
    long mu = 0, nu = 0;
    Int card_A;   // card A_{mu,nu}
    Int count_I;  // I_{mu,nu} = card{1 <= x < 2^(nu+1) : ||alpha x|| <= 2^-mu}
    Rat bound;    // 2^(nu-mu+4)/delta
    bool ok = false;
};

struct LatticePoint {
    Int x, y;
};

struct LatticeRegion {
    long mu = 0, nu = 0;
    std::vector<LatticePoint> points;    // integer points of Omega
    std::vector<LatticePoint> hull;      // convex hull, ccw
    Rat hull_area;                       // exact, shoelace
    Rat omega_area;                      // 2^(nu+1) * 2^(1-mu)
    Int count_I;                         // lattice points with x >= 1
    bool unique_primitive_case = false;  // <=1 primitive point / degenerate hull
    Rat count_bound;                     // 2^(nu-mu+4)/delta
    bool count_ok = false;
    Rat pick_ratio;                      // points/hull_area when hull is proper
};

struct PartitionReport {
    long nu = 0;
    long mu_limit = 0;        // nu + 1 + ceil(log2(1/delta))
    Int total;                // sum over mu of card A_{mu,nu}
    bool disjoint_union_ok = false;  // every x in [2^nu, 2^(nu+1)) lands in exactly
                                     // one bucket with 1 <= mu <= mu_limit
};

// Directional bracket of sigma(alpha;q,Q) = sum_{x=q}^{Q-1} 1/(||alpha x|| x log2^2 x).
SumBoundReport sigma(const QuadraticReal& alpha, const Int& q, const Int& Q);

// 2^8 delta^-1 (log2(log2 Q / log2 q) + log2(1/delta)), upper dyadic evaluation.
Rat sigma_bound(const Rat& delta, const Int& q, const Int& Q);

SumBoundReport sigma_report(const QuadraticReal& alpha, const Rat& delta,
                            const Int& q, const Int& Q);

Int count_A(const AlphaScanner& scan, long mu, long nu);
Int count_I(const AlphaScanner& scan, long mu, long nu);

CountReport count_report(const AlphaScanner& scan, const Rat& delta, long mu, long nu);

// All CountReports for one nu, sharing a single scan over x < 2^(nu+1).
std::vector<CountReport> count_reports_for_nu(const AlphaScanner& scan, const Rat& delta,
                                              long nu, long mu_limit);

LatticeRegion pick_check(const AlphaScanner& scan, const Rat& delta, long mu, long nu);

PartitionReport partition_check(const AlphaScanner& scan, const Rat& delta, long nu);

}  // namespace logbad
