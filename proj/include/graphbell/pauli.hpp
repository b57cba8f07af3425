#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphbell/graph.hpp"

namespace graphbell {

using cplx = std::complex<double>;

enum class PauliLetter : std::uint8_t { I, X, Z };

/// Signed tensor product of {I, X, Z} letters on a fixed register.
///
/// Y never appears: every construction here is generated by stabilizers of
/// the form X (x) Z...Z, so coefficients stay real and state kernels reduce
/// to index permutation plus sign flips.
struct PauliWord {
    std::vector<PauliLetter> letters;
    double coeff = 1.0;

    int size() const { return static_cast<int>(letters.size()); }
    /// Bit v set <=> letter at vertex v is X (Z for z_mask).
    std::uint64_t x_mask() const;
    std::uint64_t z_mask() const;
    /// Symbolic check: the number of sites where one word has X and the
    /// other Z is even.
    bool commutes_with(const PauliWord& other) const;
    bool same_letters(const PauliWord& other) const { return letters == other.letters; }
    std::string to_string() const;
};

/// Real-weighted sum of Pauli words on a common register. Words with
/// identical letter arrays are merged at construction; zero-coefficient
/// words are dropped.
struct PauliSum {
    std::vector<PauliWord> words;

    static PauliSum from_words(std::vector<PauliWord> input);
    int size() const { return words.empty() ? 0 : words.front().size(); }
};

/// Dense complex amplitude vector on num_qubits qubits.
/// Convention shared by every module: qubit 1 (vertex 0 in code) is the
/// most significant bit of the basis index.
struct StateVector {
    int num_qubits = 0;
    std::vector<cplx> amps;

    static StateVector zeros_ket(int num_qubits);  // |0...0>
    static StateVector uniform(int num_qubits);    // |+>^n

    std::size_t dim() const { return amps.size(); }
    double norm() const;
    StateVector& normalize();
};

cplx inner_product(const StateVector& a, const StateVector& b);  // <a|b>

/// One pass over the amplitudes: X permutes basis indices by bit flip, Z
/// multiplies by (-1)^bit, the coefficient scales. The result is not
/// renormalized.
StateVector apply_word(const PauliWord& w, const StateVector& v);
StateVector apply_sum(const PauliSum& s, const StateVector& v);

/// Applies a 2x2 operator to one qubit (0-indexed vertex order).
void apply_one_qubit(const Eigen::Matrix2cd& m, int site, StateVector& v);

/// <v|op|v>. Throws if the imaginary residue exceeds 1e-12, which signals
/// a non-Hermitian operator bug upstream.
double expectation(const PauliWord& w, const StateVector& v);
double expectation(const PauliSum& s, const StateVector& v);

/// Word i has X at vertex i, Z on its neighborhood, I elsewhere.
std::vector<PauliWord> stabilizer_generators(const Graph& g);

/// Amplitude of |t> is 2^(-n/2) * (-1)^(edge parity of the support of t).
/// Guarded by dense_limit qubits (default 16).
StateVector graph_state(const Graph& g, int dense_limit = 16);

/// cos(theta)|0...0> + sin(theta)|1...1>, theta in [0, pi/4], n >= 2.
StateVector ghz_state(int n, double theta);

/// S_1 = sin(2 theta) X...X + cos(2 theta) Z_1, S_i = Z_1 Z_i. Each output
/// stabilizes ghz_state(n, theta). theta = 0 is rejected (S_1 degenerates).
std::vector<PauliSum> tilted_stabilizers(int n, double theta);

/// Raw little-endian (re, im) doubles to `data`, JSON header with the qubit
/// count and convention tag to `header`.
void dump_state(const StateVector& v, std::ostream& data, std::ostream& header);

}  // namespace graphbell
