//! Exact prime counting up to 10⁸ by a segmented sieve over odd numbers.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest argument `prime_count` answers exactly.
pub const PRIME_COUNT_LIMIT: u64 = 100_000_000;

/// Odd indices sieved per segment (bit i stands for 2i + 1).
const SEGMENT_BITS: usize = 1 << 18;

/// Bitset of odd primes with per-word running counts.
struct OddPrimeTable {
    words: Vec<u64>,
    /// Number of set bits in all words before index `w`.
    prefix: Vec<u32>,
}

impl OddPrimeTable {
    fn build(limit: u64) -> Self {
        let max_index = ((limit - 1) / 2) as usize;
        let nbits = max_index + 1;
        let mut words = vec![u64::MAX; nbits.div_ceil(64)];
        // bit 0 is the number 1
        words[0] &= !1;
        let tail = nbits % 64;
        if tail != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << tail) - 1;
        }

        let root = (limit as f64).sqrt() as u64 + 1;
        let base = small_odd_primes(root);

        let mut seg_start = 0usize;
        while seg_start < nbits {
            let seg_end = (seg_start + SEGMENT_BITS).min(nbits);
            for &p in &base {
                let p = p as usize;
                let square_index = (p * p - 1) / 2;
                if square_index >= seg_end {
                    break;
                }
                // first odd multiple of p with index >= seg_start, at least p²
                let mut i = if square_index >= seg_start {
                    square_index
                } else {
                    let lo = 2 * seg_start + 1;
                    let mut m = lo.div_ceil(p) * p;
                    if m % 2 == 0 {
                        m += p;
                    }
                    (m - 1) / 2
                };
                while i < seg_end {
                    words[i / 64] &= !(1u64 << (i % 64));
                    i += p;
                }
            }
            seg_start = seg_end;
        }

        let mut prefix = Vec::with_capacity(words.len());
        let mut running = 0u32;
        for w in &words {
            prefix.push(running);
            running += w.count_ones();
        }
        OddPrimeTable { words, prefix }
    }

    /// Odd primes with bit index ≤ `index`.
    fn count_through(&self, index: usize) -> u64 {
        let w = index / 64;
        let bit = index % 64;
        let mask = if bit == 63 { u64::MAX } else { (1u64 << (bit + 1)) - 1 };
        u64::from(self.prefix[w]) + u64::from((self.words[w] & mask).count_ones())
    }
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            if i > 2 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn table() -> &'static OddPrimeTable {
    static TABLE: OnceLock<OddPrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| OddPrimeTable::build(PRIME_COUNT_LIMIT))
}

/// π(x), the number of primes ≤ x, for 2 ≤ x ≤ 10⁸.
pub fn prime_count(x: f64) -> Result<u64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("prime_count requires x >= 2, got {x}")));
    }
    if x > PRIME_COUNT_LIMIT as f64 {
        return Err(Error::Range(format!(
            "prime_count is exact only up to {PRIME_COUNT_LIMIT}; got {x}. \
             Use the asymptotic T/ln T for larger heights"
        )));
    }
    let n = x.floor() as u64;
    let index = ((n - 1) / 2) as usize;
    Ok(1 + table().count_through(index))
}
