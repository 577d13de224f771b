#pragma once

#include <vector>

#include "adsql/embed.hpp"

namespace adsql {

struct LimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// E, P, C, J with the integral definitions over the sphere at infinity:
//   E   = (1/8pi) int [grr5 + 3/2 tr g1]
//   P^i = (1/8pi) int x^i [grr5 + 3/2 tr g1]
//   C^i = (1/8pi) int x^i div k3
//   J^i = (1/8pi) int x^i eps^{ab} D_b (k3)_a
// The Killing fields c^i and j^i pair with the data as -C^i and -J^i
// (Hamiltonian fluxes and the large-sphere limit); see killing_charge.
struct ChargeSet {
    double E = 0;
    V3 P = V3::Zero(), C = V3::Zero(), J = V3::Zero();
};

struct RestMass {
    double m = 0, alpha = 0, beta = 0;
    bool valid = false;  // beta >= 0 and m^2 >= 0
};

ChargeSet total_charges(const SphereGrid& grid, const AsymptoticData& asym);

// value of the flux of basis field k (0 time, 1-3 p, 4-6 c, 7-9 j) in terms of the charges
double killing_charge(const ChargeSet& c, int k);

struct LimitEstimate {
    double value = 0;
    double spread = 0;  // largest deviation of the leave-one-out extrapolations
    std::vector<double> radii, samples;
};
// a + b/r + c/r^2 + ... through all radii
LimitEstimate extrapolate(const std::vector<double>& radii, const std::vector<double>& samples);

// (1/8pi) int (U(V) + V(Y)) r^2 dS^2 on the coordinate sphere of radius r
double hamiltonian_flux(const SphereGrid& grid, const SliceModel& model, const KillingField& K, double r);
LimitEstimate hamiltonian_charges(const SphereGrid& grid, const SliceModel& model, const KillingField& K,
                                  const std::vector<double>& radii);
// all ten fluxes, stored with the signs of ChargeSet
ChargeSet hamiltonian_charge_set(const SphereGrid& grid, const SliceModel& model, const std::vector<double>& radii);

// E(Sigma_r, X_r, T0), invariant form, with the round embedding at matching area radius (Newton when sigma is not round)
double quasilocal_energy_at(const SphereGrid& grid, const SliceModel& model, const KillingField& T0, double r,
                            const QleOptions& opt = {});
LimitEstimate quasilocal_limit(const SphereGrid& grid, const SliceModel& model, const KillingField& T0,
                               const std::vector<double>& radii, const QleOptions& opt = {});

// dP/dt = -C, dC/dt = P, E and J fixed
ChargeSet evolve_charges(const ChargeSet& c0, double t);
ChargeSet evolve_charges_rk4(const ChargeSet& c0, double t, double max_step = 1e-3);

RestMass rest_mass(const ChargeSet& c);

}  // namespace adsql
