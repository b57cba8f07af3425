#pragma once

#include <array>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "graphbell/expression.hpp"

namespace graphbell {

/// Per-party pair (A0, A1) of 2x2 Hermitian observables. Validity (Hermitian,
/// unit square) is checked on demand rather than at construction so that the
/// certificate module can be fed deliberately broken sets.
struct ObservableSet {
    std::vector<std::array<Eigen::Matrix2cd, 2>> parties;

    int num_parties() const { return static_cast<int>(parties.size()); }
    const Eigen::Matrix2cd& get(int party, int x) const;
    /// A0, A1, A0 + A1 or A0 - A1 for the given party.
    Eigen::Matrix2cd setting_matrix(int party, Setting s) const;

    double max_hermiticity_error() const;
    double max_unit_square_error() const;
    bool valid(double tol = 1e-12) const;
};

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd pauli_h();  // (X + Z)/sqrt(2)
Eigen::Matrix2cd pauli_v();  // (X - Z)/sqrt(2)

/// Maximal-violation observables for the expression's family.
/// Graph families: (X +/- Z)/sqrt(2) at every substitution vertex, (X, Z)
/// elsewhere. Tilted: sin(mu) X +/- cos(mu) Z at party 1, (X, Z) elsewhere.
ObservableSet canonical_observables(const BellExpression& e);

/// One angle per party in [0, pi/2]:
///   party 1:    cos(a) X + (-1)^x sin(a) Z
///   party i>=2: cos(a) H + (-1)^x sin(a) V
/// All angles pi/4 reproduce the graph-family canonical observables.
ObservableSet jordan_observables(const std::vector<double>& angles);

/// Uniform draw from [0, pi/2]^n; uses an explicit 53-bit mapping so the
/// stream is identical across platforms for a given seed.
std::vector<double> random_jordan_angles(int n, std::mt19937_64& rng);

/// Conjugates both observables of one party by exp(-i eps Y / 2), a rotation
/// in the X-Z plane. Preserves anticommutation; detunes the extraction.
ObservableSet rotate_party(ObservableSet obs, int party, double eps);

}  // namespace graphbell
