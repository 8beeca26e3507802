#include "shapescale/ari.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "shapescale/errors.hpp"

namespace shapescale {

namespace {

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

/// Unsigned big integer on 32-bit limbs, little-endian. Only what the
/// Stirling recurrence needs: add and multiply-by-small.
class BigUint {
public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v) {
        while (v) {
            limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
            v >>= 32;
        }
    }

    bool is_zero() const { return limbs_.empty(); }

    BigUint& operator+=(const BigUint& other) {
        const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
        limbs_.resize(n, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry + limbs_[i];
            if (i < other.limbs_.size()) s += other.limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(s & 0xffffffffULL);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        return *this;
    }

    BigUint times(std::uint32_t m) const {
        BigUint out;
        if (m == 0 || is_zero()) return out;
        out.limbs_.resize(limbs_.size());
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            const std::uint64_t p = static_cast<std::uint64_t>(limbs_[i]) * m + carry;
            out.limbs_[i] = static_cast<std::uint32_t>(p & 0xffffffffULL);
            carry = p >> 32;
        }
        while (carry) {
            out.limbs_.push_back(static_cast<std::uint32_t>(carry & 0xffffffffULL));
            carry >>= 32;
        }
        return out;
    }

    double to_double() const {
        double r = 0.0;
        for (std::size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + limbs_[i];
        return r;
    }

private:
    std::vector<std::uint32_t> limbs_;
};

void check_partitions(const Partition& reference, const Partition& obtained) {
    if (reference.labels.size() != obtained.labels.size()) {
        throw UsageError("partition length mismatch: " + std::to_string(reference.labels.size()) +
                         " vs " + std::to_string(obtained.labels.size()));
    }
    if (reference.labels.size() < 2) throw UsageError("partitions need at least 2 samples");
}

}  // namespace

PairCounts pair_counts(const Partition& reference, const Partition& obtained) {
    check_partitions(reference, obtained);
    const std::size_t n = reference.labels.size();

    std::map<std::pair<int, int>, std::int64_t> cells;
    std::map<int, std::int64_t> ref_sizes;
    std::map<int, std::int64_t> obt_sizes;
    for (std::size_t i = 0; i < n; ++i) {
        ++cells[{reference.labels[i], obtained.labels[i]}];
        ++ref_sizes[reference.labels[i]];
        ++obt_sizes[obtained.labels[i]];
    }

    std::int64_t ts = 0, ref_pairs = 0, obt_pairs = 0;
    for (const auto& [key, count] : cells) ts += choose2(count);
    for (const auto& [key, count] : ref_sizes) ref_pairs += choose2(count);
    for (const auto& [key, count] : obt_sizes) obt_pairs += choose2(count);

    PairCounts counts;
    counts.TS = ts;
    counts.FD = ref_pairs - ts;   // co-clustered in the reference, split in obtained
    counts.FS = obt_pairs - ts;   // co-clustered in obtained, split in the reference
    counts.TD = choose2(static_cast<std::int64_t>(n)) - counts.TS - counts.FD - counts.FS;
    return counts;
}

PairCounts pair_counts_direct(const Partition& reference, const Partition& obtained) {
    check_partitions(reference, obtained);
    const std::size_t n = reference.labels.size();
    PairCounts counts;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same_ref = reference.labels[i] == reference.labels[j];
            const bool same_obt = obtained.labels[i] == obtained.labels[j];
            if (same_ref && same_obt) ++counts.TS;
            else if (!same_ref && !same_obt) ++counts.TD;
            else if (same_ref) ++counts.FD;
            else ++counts.FS;
        }
    }
    return counts;
}

double rand_index(const PairCounts& counts, std::size_t n_orig) {
    if (n_orig < 2) throw UsageError("rand index needs at least 2 samples");
    const auto total = choose2(static_cast<std::int64_t>(n_orig));
    if (counts.total() != total) {
        throw UsageError("pair counts do not sum to C(n, 2) for n = " + std::to_string(n_orig));
    }
    return static_cast<double>(counts.TS + counts.TD) / static_cast<double>(total);
}

double stirling_ratio(std::size_t n_orig, std::size_t C) {
    if (C < 2) throw UsageError("stirling ratio needs at least 2 clusters");
    if (C > n_orig) {
        throw UsageError("cluster count " + std::to_string(C) + " exceeds sample count " +
                         std::to_string(n_orig));
    }

    // Row i holds S(i, 0..C) rescaled by 2^-exponent[i]; the recurrence
    // S(i, j) = j S(i-1, j) + S(i-1, j-1) only ever combines adjacent rows,
    // and the final ratio cancels the scaling.
    std::vector<double> prev(C + 1, 0.0), cur(C + 1, 0.0);
    prev[0] = 1.0;  // S(0, 0) = 1
    int prev_exp = 0, cur_exp = 0;
    double numerator = 0.0;
    int numerator_exp = 0;

    for (std::size_t i = 1; i <= n_orig; ++i) {
        cur[0] = 0.0;
        for (std::size_t j = 1; j <= C; ++j) {
            cur[j] = static_cast<double>(j) * prev[j] + prev[j - 1];
        }
        cur_exp = prev_exp;
        const double row_max = *std::max_element(cur.begin(), cur.end());
        if (row_max > 0x1p512) {
            for (double& v : cur) v *= 0x1p-512;
            cur_exp += 512;
        }
        if (i == n_orig - 1) {
            numerator = cur[C];
            numerator_exp = cur_exp;
        }
        std::swap(prev, cur);
        prev_exp = cur_exp;
    }
    // prev now holds row n_orig.
    const double u = std::ldexp(numerator / prev[C], numerator_exp - prev_exp);

    if (n_orig <= 200) {
        const double exact = stirling_ratio_exact(n_orig, C);
        if (std::abs(u - exact) > 1e-12 * std::max(1.0, std::abs(exact))) {
            throw NumericError("normalized Stirling ratio disagrees with the exact evaluation");
        }
    }
    return u;
}

double stirling_ratio_exact(std::size_t n_orig, std::size_t C) {
    if (C < 2) throw UsageError("stirling ratio needs at least 2 clusters");
    if (C > n_orig) {
        throw UsageError("cluster count " + std::to_string(C) + " exceeds sample count " +
                         std::to_string(n_orig));
    }
    std::vector<BigUint> prev(C + 1), cur(C + 1);
    prev[0] = BigUint(1);
    BigUint numerator;
    for (std::size_t i = 1; i <= n_orig; ++i) {
        cur[0] = BigUint();
        for (std::size_t j = 1; j <= C; ++j) {
            cur[j] = prev[j].times(static_cast<std::uint32_t>(j));
            cur[j] += prev[j - 1];
        }
        if (i == n_orig - 1) numerator = cur[C];
        std::swap(prev, cur);
    }
    return numerator.to_double() / prev[C].to_double();
}

AriReport ari_fnc(const Partition& reference, const Partition& obtained) {
    check_partitions(reference, obtained);
    const std::size_t n = reference.labels.size();
    const PairCounts counts = pair_counts(reference, obtained);
    const auto total = static_cast<double>(choose2(static_cast<std::int64_t>(n)));

    AriReport report;
    report.ri = rand_index(counts, n);
    report.u = stirling_ratio(n, obtained.C);
    report.v = static_cast<double>(counts.TS + counts.FD) / total;
    report.expected_ri = report.u * report.v + (1.0 - report.u) * (1.0 - report.v);
    const double denom = 1.0 - report.expected_ri;
    if (denom == 0.0) {
        throw NumericError("expected Rand index equals 1; the fixed-cluster ARI is undefined here");
    }
    report.ari_fnc = (report.ri - report.expected_ri) / denom;
    return report;
}

}  // namespace shapescale
