use super::PrimeError;

pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;
pub const DEFAULT_MAX_HI: u64 = 1_000_000_000_000;

/// Closed interval `[lo, hi]` of integers to scan for primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    /// `lo` below 2 is allowed and simply yields nothing below 2.
    pub fn new(lo: u64, hi: u64) -> Result<Self, PrimeError> {
        if lo > hi {
            return Err(PrimeError::InvalidRange { lo, hi });
        }
        Ok(PrimeRange { lo, hi })
    }
}

/// Segmented sieve of Eratosthenes. Memory is `O(segment_len + √hi)`.
#[derive(Debug, Clone, Copy)]
pub struct SegmentedSieve {
    pub segment_len: usize,
    pub max_hi: u64,
}

impl Default for SegmentedSieve {
    fn default() -> Self {
        SegmentedSieve { segment_len: DEFAULT_SEGMENT_LEN, max_hi: DEFAULT_MAX_HI }
    }
}

impl SegmentedSieve {
    pub fn with_segment_len(segment_len: usize) -> Self {
        SegmentedSieve { segment_len: segment_len.max(16), ..Default::default() }
    }

    pub fn primes(&self, range: PrimeRange) -> Result<Vec<u64>, PrimeError> {
        let mut out = Vec::new();
        self.for_each_prime(range, |p| out.push(p))?;
        Ok(out)
    }

    /// Calls `f` on every prime of the range in increasing order.
    pub fn for_each_prime<F: FnMut(u64)>(&self, range: PrimeRange, mut f: F) -> Result<(), PrimeError> {
        if range.hi > self.max_hi {
            return Err(PrimeError::Capacity { requested: range.hi, max: self.max_hi });
        }
        let lo = range.lo.max(2);
        let hi = range.hi;
        if lo > hi {
            return Ok(());
        }
        let base = simple_sieve(isqrt(hi));
        let seg = self.segment_len as u64;
        let mut mark = vec![true; self.segment_len];
        let mut start = lo;
        loop {
            let end = hi.min(start.saturating_add(seg - 1));
            let len = (end - start + 1) as usize;
            mark[..len].iter_mut().for_each(|m| *m = true);
            for &p in &base {
                if p * p > end {
                    break;
                }
                let first = (p * p).max(start.div_ceil(p) * p);
                let mut j = first;
                while j <= end {
                    mark[(j - start) as usize] = false;
                    j += p;
                }
            }
            for (i, &m) in mark[..len].iter().enumerate() {
                if m {
                    f(start + i as u64);
                }
            }
            if end == hi {
                break;
            }
            start = end + 1;
        }
        Ok(())
    }
}

/// Primes in `range`, increasing, using the default segment size.
pub fn sieve_primes(range: PrimeRange) -> Result<Vec<u64>, PrimeError> {
    SegmentedSieve::default().primes(range)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division_count(limit: u64) -> usize {
        let mut primes: Vec<u64> = Vec::new();
        for n in 2..=limit {
            if primes.iter().take_while(|&&p| p * p <= n).all(|&p| n % p != 0) {
                primes.push(n);
            }
        }
        primes.len()
    }

    #[test]
    fn small_range() {
        assert_eq!(sieve_primes(PrimeRange::new(2, 10).unwrap()).unwrap(), vec![2, 3, 5, 7]);
        assert!(sieve_primes(PrimeRange::new(1, 1).unwrap()).unwrap().is_empty());
        assert!(sieve_primes(PrimeRange::new(0, 1).unwrap()).unwrap().is_empty());
        assert_eq!(sieve_primes(PrimeRange::new(97, 97).unwrap()).unwrap(), vec![97]);
    }

    #[test]
    fn pi_one_million() {
        let n = sieve_primes(PrimeRange::new(2, 1_000_000).unwrap()).unwrap().len();
        assert_eq!(n, trial_division_count(1_000_000));
        assert_eq!(n, 78_498);
    }

    #[test]
    fn capacity_error() {
        let s = SegmentedSieve { segment_len: 1024, max_hi: 1000 };
        assert_eq!(
            s.primes(PrimeRange::new(2, 1001).unwrap()),
            Err(PrimeError::Capacity { requested: 1001, max: 1000 })
        );
        assert!(PrimeRange::new(5, 4).is_err());
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, u32::MAX as u64, u64::MAX] {
            let r = isqrt(n);
            assert!(r as u128 * r as u128 <= n as u128);
            assert!((r as u128 + 1) * (r as u128 + 1) > n as u128);
        }
    }

    proptest! {
        #[test]
        fn segmentation_is_transparent(limit in 2u64..200_000, seg in 16usize..5000, cut in 0u64..200_000) {
            let whole = sieve_primes(PrimeRange::new(2, limit).unwrap()).unwrap();
            let small = SegmentedSieve::with_segment_len(seg);
            let cut = 2 + cut % (limit - 1);
            let mut parts = small.primes(PrimeRange::new(2, cut).unwrap()).unwrap();
            if cut < limit {
                parts.extend(small.primes(PrimeRange::new(cut + 1, limit).unwrap()).unwrap());
            }
            prop_assert_eq!(whole, parts);
        }
    }
}
