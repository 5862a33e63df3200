/// Smallest-prime-factor table for fast factorization of small integers.
#[derive(Clone, Debug)]
pub struct PrimeSieve {
    spf: Vec<u32>,
}

impl PrimeSieve {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(2);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        PrimeSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Prime factorization as `(p, exponent)` with increasing `p`. Falls back to
    /// trial division above the table limit. `factor(1)` is empty.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1);
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut push = |p: u64| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        if n as usize > self.limit() {
            let mut p = 2u64;
            while p * p <= n && n as usize > self.limit() {
                while n.is_multiple_of(p) {
                    push(p);
                    n /= p;
                }
                p += 1;
            }
            if n as usize > self.limit() {
                push(n);
                return out;
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            push(p);
            n /= p;
        }
        out
    }
}

/// Divisors of `n` from its factorization, unsorted.
pub fn divisors_of(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs
}
