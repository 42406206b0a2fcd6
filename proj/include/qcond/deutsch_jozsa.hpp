#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qcond/boolean_function.hpp"
#include "qcond/errors.hpp"
#include "qcond/ledger.hpp"

namespace qcond {

enum class DjVerdict { Constant, Balanced };

/// Deutsch-Jozsa on a one-output function promised constant or balanced.
/// One oracle application: the phase-kickback state (-1)^{f(x)} / sqrt(2^n)
/// is pushed through a Hadamard transform and the all-zeros amplitude is
/// read out. Exact under the promise; behaviour outside it is undefined.
inline DjVerdict dj_query(const BooleanFunctionTable &f, QueryLedger &ledger) {
    if (f.num_outputs > 1) throw InvalidParameter("dj_query: needs a one-output function");
    if (f.num_inputs > 14) throw InvalidParameter("dj_query: n must be <= 14");

    std::vector<double> amp(f.domain_size());
    for (std::size_t x = 0; x < amp.size(); ++x) amp[x] = f.table[x] ? -1.0 : 1.0;
    ledger.charge(QueryKind::QSamp);

    // In-place Walsh-Hadamard transform (unnormalized).
    for (std::size_t h = 1; h < amp.size(); h <<= 1) {
        for (std::size_t i = 0; i < amp.size(); i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = amp[j];
                const double b = amp[j + h];
                amp[j] = a + b;
                amp[j + h] = a - b;
            }
        }
    }

    // Constant functions concentrate all amplitude on |0...0>.
    const double zeros = std::abs(amp[0]) / static_cast<double>(amp.size());
    return zeros > 0.5 ? DjVerdict::Constant : DjVerdict::Balanced;
}

}  // namespace qcond
