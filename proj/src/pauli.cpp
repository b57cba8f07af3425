#include "graphbell/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "graphbell/errors.hpp"

namespace graphbell {

namespace {

constexpr double kHermitianResidueTol = 1e-12;

void check_register(const PauliWord& w, const StateVector& v) {
    if (w.size() != v.num_qubits) {
        throw ValidationError("pauli word acts on " + std::to_string(w.size()) +
                              " qubits, state has " + std::to_string(v.num_qubits));
    }
}

/// Masks in basis-index space (qubit 1 = most significant bit).
struct BasisMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
};

BasisMasks basis_masks(const PauliWord& w) {
    BasisMasks m;
    const int n = w.size();
    for (int v = 0; v < n; ++v) {
        const std::uint64_t bit = 1ULL << (n - 1 - v);
        if (w.letters[static_cast<std::size_t>(v)] == PauliLetter::X) m.x |= bit;
        if (w.letters[static_cast<std::size_t>(v)] == PauliLetter::Z) m.z |= bit;
    }
    return m;
}

cplx bracket(const PauliWord& w, const StateVector& v) {
    check_register(w, v);
    const BasisMasks m = basis_masks(w);
    cplx acc = 0.0;
    for (std::size_t b = 0; b < v.dim(); ++b) {
        const double sign = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
        acc += std::conj(v.amps[b ^ m.x]) * (w.coeff * sign) * v.amps[b];
    }
    return acc;
}

double take_real(cplx value, double scale) {
    if (std::abs(value.imag()) > kHermitianResidueTol * std::max(1.0, scale)) {
        throw ValidationError("expectation has imaginary residue " +
                              std::to_string(value.imag()) +
                              "; operator is not Hermitian");
    }
    return value.real();
}

}  // namespace

std::uint64_t PauliWord::x_mask() const {
    std::uint64_t m = 0;
    for (int v = 0; v < size(); ++v) {
        if (letters[static_cast<std::size_t>(v)] == PauliLetter::X) m |= 1ULL << v;
    }
    return m;
}

std::uint64_t PauliWord::z_mask() const {
    std::uint64_t m = 0;
    for (int v = 0; v < size(); ++v) {
        if (letters[static_cast<std::size_t>(v)] == PauliLetter::Z) m |= 1ULL << v;
    }
    return m;
}

bool PauliWord::commutes_with(const PauliWord& other) const {
    // Sites where one word has X and the other Z each contribute one sign
    // flip on reordering; the words commute iff the count is even.
    const std::uint64_t xz = x_mask() & other.z_mask();
    const std::uint64_t zx = z_mask() & other.x_mask();
    return ((std::popcount(xz) + std::popcount(zx)) & 1) == 0;
}

std::string PauliWord::to_string() const {
    std::string s = (coeff < 0 ? "-" : "+") + std::to_string(std::abs(coeff)) + " ";
    for (PauliLetter l : letters) {
        s += (l == PauliLetter::I) ? 'I' : (l == PauliLetter::X ? 'X' : 'Z');
    }
    return s;
}

PauliSum PauliSum::from_words(std::vector<PauliWord> input) {
    PauliSum out;
    for (auto& w : input) {
        if (!out.words.empty() && w.size() != out.words.front().size()) {
            throw ValidationError("pauli sum mixes register sizes");
        }
        auto match = std::find_if(out.words.begin(), out.words.end(),
                                  [&](const PauliWord& o) { return o.same_letters(w); });
        if (match != out.words.end()) {
            match->coeff += w.coeff;
        } else {
            out.words.push_back(std::move(w));
        }
    }
    std::erase_if(out.words, [](const PauliWord& w) { return w.coeff == 0.0; });
    return out;
}

StateVector StateVector::zeros_ket(int num_qubits) {
    StateVector v;
    v.num_qubits = num_qubits;
    v.amps.assign(std::size_t{1} << num_qubits, 0.0);
    v.amps[0] = 1.0;
    return v;
}

StateVector StateVector::uniform(int num_qubits) {
    StateVector v;
    v.num_qubits = num_qubits;
    const std::size_t dim = std::size_t{1} << num_qubits;
    v.amps.assign(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    return v;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

StateVector& StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
    for (cplx& a : amps) a /= n;
    return *this;
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits != b.num_qubits) {
        throw ValidationError("inner product register mismatch");
    }
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return acc;
}

StateVector apply_word(const PauliWord& w, const StateVector& v) {
    check_register(w, v);
    const BasisMasks m = basis_masks(w);
    StateVector out;
    out.num_qubits = v.num_qubits;
    out.amps.assign(v.dim(), 0.0);
    for (std::size_t b = 0; b < v.dim(); ++b) {
        const double sign = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
        out.amps[b ^ m.x] = w.coeff * sign * v.amps[b];
    }
    return out;
}

StateVector apply_sum(const PauliSum& s, const StateVector& v) {
    StateVector out;
    out.num_qubits = v.num_qubits;
    out.amps.assign(v.dim(), 0.0);
    for (const PauliWord& w : s.words) {
        const StateVector part = apply_word(w, v);
        for (std::size_t i = 0; i < out.dim(); ++i) out.amps[i] += part.amps[i];
    }
    return out;
}

void apply_one_qubit(const Eigen::Matrix2cd& m, int site, StateVector& v) {
    if (site < 0 || site >= v.num_qubits) {
        throw ValidationError("apply_one_qubit: site out of range");
    }
    const std::uint64_t bit = 1ULL << (v.num_qubits - 1 - site);
    for (std::size_t b = 0; b < v.dim(); ++b) {
        if (b & bit) continue;
        const cplx a0 = v.amps[b];
        const cplx a1 = v.amps[b | bit];
        v.amps[b] = m(0, 0) * a0 + m(0, 1) * a1;
        v.amps[b | bit] = m(1, 0) * a0 + m(1, 1) * a1;
    }
}

double expectation(const PauliWord& w, const StateVector& v) {
    return take_real(bracket(w, v), std::abs(w.coeff));
}

double expectation(const PauliSum& s, const StateVector& v) {
    cplx acc = 0.0;
    double scale = 0.0;
    for (const PauliWord& w : s.words) {
        acc += bracket(w, v);
        scale += std::abs(w.coeff);
    }
    return take_real(acc, scale);
}

std::vector<PauliWord> stabilizer_generators(const Graph& g) {
    const int n = g.num_vertices();
    std::vector<PauliWord> gens;
    gens.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        PauliWord w;
        w.letters.assign(static_cast<std::size_t>(n), PauliLetter::I);
        w.letters[static_cast<std::size_t>(v)] = PauliLetter::X;
        for (int u : g.neighborhood(v)) {
            w.letters[static_cast<std::size_t>(u)] = PauliLetter::Z;
        }
        w.coeff = 1.0;
        gens.push_back(std::move(w));
    }
    return gens;
}

StateVector graph_state(const Graph& g, int dense_limit) {
    const int n = g.num_vertices();
    if (n > dense_limit) {
        throw ResourceLimitError("graph_state: " + std::to_string(n) +
                                 " qubits exceeds the dense limit of " +
                                 std::to_string(dense_limit));
    }
    StateVector v;
    v.num_qubits = n;
    const std::size_t dim = std::size_t{1} << n;
    v.amps.resize(dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t b = 0; b < dim; ++b) {
        std::uint64_t support = 0;
        for (int vert = 0; vert < n; ++vert) {
            if ((b >> (n - 1 - vert)) & 1ULL) support |= 1ULL << vert;
        }
        v.amps[b] = edge_parity(g, support) ? -scale : scale;
    }
    return v;
}

StateVector ghz_state(int n, double theta) {
    if (n < 2) throw ValidationError("ghz_state requires n >= 2");
    if (theta < 0.0 || theta > std::numbers::pi / 4 + 1e-12) {
        throw ValidationError("ghz_state: theta must lie in [0, pi/4]");
    }
    StateVector v;
    v.num_qubits = n;
    v.amps.assign(std::size_t{1} << n, 0.0);
    v.amps.front() = std::cos(theta);
    v.amps.back() = std::sin(theta);
    return v;
}

std::vector<PauliSum> tilted_stabilizers(int n, double theta) {
    if (n < 2) throw ValidationError("tilted_stabilizers requires n >= 2");
    if (theta <= 0.0 || theta > std::numbers::pi / 4 + 1e-12) {
        throw ValidationError(
            "tilted_stabilizers: theta must lie in (0, pi/4]; theta = 0 degenerates S_1");
    }
    std::vector<PauliSum> out;
    out.reserve(static_cast<std::size_t>(n));

    // cos(pi/2) lands at ~6e-17 in doubles; snap so theta = pi/4 yields the
    // exact X...X stabilizer.
    double cos2t = std::cos(2 * theta);
    if (std::abs(cos2t) < 1e-15) cos2t = 0.0;

    PauliWord all_x;
    all_x.letters.assign(static_cast<std::size_t>(n), PauliLetter::X);
    all_x.coeff = std::sin(2 * theta);
    PauliWord z1;
    z1.letters.assign(static_cast<std::size_t>(n), PauliLetter::I);
    z1.letters[0] = PauliLetter::Z;
    z1.coeff = cos2t;
    out.push_back(PauliSum::from_words({all_x, z1}));

    for (int i = 1; i < n; ++i) {
        PauliWord zz;
        zz.letters.assign(static_cast<std::size_t>(n), PauliLetter::I);
        zz.letters[0] = PauliLetter::Z;
        zz.letters[static_cast<std::size_t>(i)] = PauliLetter::Z;
        zz.coeff = 1.0;
        out.push_back(PauliSum::from_words({zz}));
    }
    return out;
}

void dump_state(const StateVector& v, std::ostream& data, std::ostream& header) {
    nlohmann::json h;
    h["n"] = v.num_qubits;
    h["count"] = v.dim();
    h["format"] = "f64-le-interleaved-re-im";
    h["convention"] = "qubit1-msb";
    header << h.dump();

    for (const cplx& a : v.amps) {
        for (double part : {a.real(), a.imag()}) {
            const std::uint64_t bits = std::bit_cast<std::uint64_t>(part);
            char buf[8];
            for (int byte = 0; byte < 8; ++byte) {
                buf[byte] = static_cast<char>((bits >> (8 * byte)) & 0xff);
            }
            data.write(buf, 8);
        }
    }
}

}  // namespace graphbell
