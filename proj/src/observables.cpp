#include "graphbell/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "graphbell/errors.hpp"

namespace graphbell {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

const Eigen::Matrix2cd& ObservableSet::get(int party, int x) const {
    if (party < 0 || party >= num_parties() || x < 0 || x > 1) {
        throw ValidationError("observable lookup out of range");
    }
    return parties[static_cast<std::size_t>(party)][static_cast<std::size_t>(x)];
}

Eigen::Matrix2cd ObservableSet::setting_matrix(int party, Setting s) const {
    switch (s) {
        case Setting::A0: return get(party, 0);
        case Setting::A1: return get(party, 1);
        case Setting::Sum: return get(party, 0) + get(party, 1);
        case Setting::Diff: return get(party, 0) - get(party, 1);
    }
    throw ValidationError("unknown setting");
}

double ObservableSet::max_hermiticity_error() const {
    double worst = 0.0;
    for (const auto& pair : parties) {
        for (const auto& m : pair) {
            worst = std::max(worst, (m - m.adjoint().eval()).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double ObservableSet::max_unit_square_error() const {
    double worst = 0.0;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (const auto& pair : parties) {
        for (const auto& m : pair) {
            worst = std::max(worst, (m * m - id).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

bool ObservableSet::valid(double tol) const {
    return max_hermiticity_error() <= tol && max_unit_square_error() <= tol;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd pauli_h() { return (pauli_x() + pauli_z()) / kSqrt2; }

Eigen::Matrix2cd pauli_v() { return (pauli_x() - pauli_z()) / kSqrt2; }

ObservableSet canonical_observables(const BellExpression& e) {
    ObservableSet obs;
    obs.parties.assign(static_cast<std::size_t>(e.n_parties),
                       {pauli_x(), pauli_z()});
    if (e.meta.kind == "tilted") {
        if (!e.meta.mu) throw ValidationError("tilted expression carries no mu");
        const double mu = *e.meta.mu;
        obs.parties[0] = {std::sin(mu) * pauli_x() + std::cos(mu) * pauli_z(),
                          std::sin(mu) * pauli_x() - std::cos(mu) * pauli_z()};
        return obs;
    }
    if (e.meta.kind == "graph" || e.meta.kind == "multi") {
        for (int v : e.meta.substitutions) {
            obs.parties[static_cast<std::size_t>(v)] = {pauli_h(), pauli_v()};
        }
        return obs;
    }
    throw ValidationError("no canonical observables for expression kind '" +
                          e.meta.kind + "'");
}

ObservableSet jordan_observables(const std::vector<double>& angles) {
    ObservableSet obs;
    obs.parties.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double a = angles[i];
        if (a < 0.0 || a > std::numbers::pi / 2 + 1e-12) {
            throw ValidationError("jordan angle out of [0, pi/2]");
        }
        const Eigen::Matrix2cd base = (i == 0) ? pauli_x() : pauli_h();
        const Eigen::Matrix2cd tilt = (i == 0) ? pauli_z() : pauli_v();
        obs.parties.push_back({std::cos(a) * base + std::sin(a) * tilt,
                               std::cos(a) * base - std::sin(a) * tilt});
    }
    return obs;
}

std::vector<double> random_jordan_angles(int n, std::mt19937_64& rng) {
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        a = unit * (std::numbers::pi / 2);
    }
    return angles;
}

ObservableSet rotate_party(ObservableSet obs, int party, double eps) {
    if (party < 0 || party >= obs.num_parties()) {
        throw ValidationError("rotate_party: party out of range");
    }
    Eigen::Matrix2cd r;
    r << std::cos(eps / 2), -std::sin(eps / 2), std::sin(eps / 2), std::cos(eps / 2);
    for (auto& m : obs.parties[static_cast<std::size_t>(party)]) {
        m = r * m * r.adjoint();
    }
    return obs;
}

}  // namespace graphbell
